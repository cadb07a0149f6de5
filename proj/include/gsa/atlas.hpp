#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "congruence.hpp"
#include "epi.hpp"
#include "mcg.hpp"
#include "standard_groups.hpp"
#include "util.hpp"

namespace gsa
{

inline constexpr int kSchemaVersion = 1;

struct AtlasConfig
{
  std::uint64_t congruence_cap = kDefaultCongruenceCap;
  std::size_t max_order = 200'000;
  std::size_t element_cap = ElementTable::kDefaultCap;
  std::uint64_t pair_budget = EpiOptions{}.pair_budget;
  unsigned threads = 1;
};

struct HigmanField
{
  std::uint64_t order = 1;
  std::uint64_t class_size = 1;
  std::string label;

  friend bool
  operator==(HigmanField const &, HigmanField const &) = default;
};

struct CongruenceField
{
  std::uint64_t e = 0; // 0 when skipped
  std::uint64_t f = 0;
  Verdict verdict = Verdict::SkippedCap;
  std::vector<std::string> certificates;

  friend bool
  operator==(CongruenceField const &, CongruenceField const &) = default;
};

struct MonodromyField
{
  AltSym classification = AltSym::Other;
  std::uint64_t domain = 0;

  friend bool
  operator==(MonodromyField const &, MonodromyField const &) = default;
};

/// One component. Fields are exactly those of the JSON cache.
struct ComponentRow
{
  std::uint64_t d = 0;
  std::uint64_t c2 = 0;
  std::uint64_t c3 = 0;
  bool minus_i = true;
  std::vector<std::uint64_t> cusp_widths;
  std::uint64_t genus = 0;
  std::uint64_t level = 1;
  HigmanField higman;
  CongruenceField congruence;
  MonodromyField monodromy;

  friend bool
  operator==(ComponentRow const &, ComponentRow const &) = default;
};

struct AbsRow
{
  std::vector<std::uint64_t> members; // component indices
  std::uint64_t abs_degree = 0;
  MonodromyField abs_monodromy;
  bool heuristic = false;

  friend bool
  operator==(AbsRow const &, AbsRow const &) = default;
};

struct AtlasReport
{
  std::string spec;
  std::string order;
  std::vector<ComponentRow> components;
  std::vector<AbsRow> abs;

  friend bool
  operator==(AtlasReport const &, AtlasReport const &) = default;
};

inline bool
any_heuristic(AtlasReport const &r)
{
  return std::any_of(r.abs.begin(), r.abs.end(), [](AbsRow const &a) { return a.heuristic; });
}

/// Full pipeline for one group. Rows are ordered by (d, least point hash).
inline AtlasReport
run_atlas(ResolvedGroup const &rg, AtlasConfig const &cfg = {})
{
  AtlasReport rep;
  rep.spec = rg.spec.text;
  rep.order = rg.group.order().str();
  if (rg.group.order() > cfg.max_order)
    throw cap_exceeded("group order " + rep.order + " exceeds the configured maximum " +
                       std::to_string(cfg.max_order));

  EpiOptions eo;
  eo.element_cap = cfg.element_cap;
  eo.pair_budget = cfg.pair_budget;
  eo.threads = cfg.threads;
  EpiContext const ctx(rg.group, eo);
  EpiSet const set(ctx.enumerate(eo));
  auto const comps = decompose_components(ctx, set, cfg.threads);

  rep.components.resize(comps.size());
  parallel_for(comps.size(), cfg.threads, [&](std::size_t i) {
    auto const &c = comps[i];
    auto const ca = coset_action(c);
    auto const sig = signature(c, ca);

    auto const hig = ctx.higman_invariant(set[c.points[0]]);
    bool criterion = false;
    for (auto p : c.points) {
      if (ctx.higman_invariant(set[p]).class_index != hig.class_index)
        throw consistency_error("Higman invariant is not constant on a component");
      criterion = criterion || criterion_A(ctx, set[p]).has_value();
    }

    auto const mono = monodromy_summary(ca);
    auto const cong = congruence_verdict(sig, c, cfg.congruence_cap);

    auto &row = rep.components[i];
    row.d = sig.d;
    row.c2 = sig.c2;
    row.c3 = sig.c3;
    row.minus_i = sig.minus_i;
    row.cusp_widths = sig.cusp_widths;
    row.genus = sig.genus;
    row.level = sig.level;
    row.higman = {hig.commutator_class->element_order, hig.commutator_class->size, hig.commutator_class->label};
    row.congruence.e = cong.congruence_degree_e;
    row.congruence.f = cong.congruence_deficiency_f;
    row.congruence.verdict = cong.verdict;
    if (criterion)
      row.congruence.certificates.push_back(kCertificateA);
    if (auto m = monodromic_certificate(mono, sig.level))
      row.congruence.certificates.push_back(*m);
    if (!row.congruence.certificates.empty() && cong.verdict == Verdict::Congruence)
      throw consistency_error("a noncongruence certificate fired on a congruence component");
    row.monodromy = {mono.classification, mono.domain_size};
  });

  for (auto const &ac : abs_components(ctx, set, comps, rg.auts)) {
    AbsRow a;
    a.members.assign(ac.members.begin(), ac.members.end());
    a.abs_degree = ac.abs_degree;
    a.abs_monodromy = {ac.monodromy.classification, ac.monodromy.domain_size};
    a.heuristic = ac.heuristic;
    rep.abs.push_back(std::move(a));
  }
  return rep;
}

inline AtlasReport
run_atlas(GroupSpec const &spec, AtlasConfig const &cfg = {})
{
  return run_atlas(resolve_group(spec), cfg);
}

// ---------------------------------------------------------------- JSON

inline AltSym
altsym_from_string(std::string const &s)
{
  if (s == "Alt")
    return AltSym::Alt;
  if (s == "Sym")
    return AltSym::Sym;
  if (s == "Other")
    return AltSym::Other;
  throw usage_error("unknown monodromy class '" + s + "'");
}

inline nlohmann::ordered_json
to_json(AtlasReport const &r)
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["group"] = {{"spec", r.spec}, {"order", r.order}};
  j["components"] = ordered_json::array();
  for (auto const &c : r.components) {
    ordered_json row;
    row["d"] = c.d;
    row["c2"] = c.c2;
    row["c3"] = c.c3;
    row["minus_i"] = c.minus_i;
    row["cusp_widths"] = c.cusp_widths;
    row["genus"] = c.genus;
    row["level"] = c.level;
    row["higman"] = {{"order", c.higman.order}, {"class_size", c.higman.class_size}, {"label", c.higman.label}};
    row["congruence"] = {{"e", c.congruence.e},
                         {"f", c.congruence.f},
                         {"verdict", to_string(c.congruence.verdict)},
                         {"certificates", c.congruence.certificates}};
    row["monodromy"] = {{"class", to_string(c.monodromy.classification)}, {"domain", c.monodromy.domain}};
    j["components"].push_back(std::move(row));
  }
  j["abs"] = ordered_json::array();
  for (auto const &a : r.abs)
    j["abs"].push_back({{"members", a.members},
                        {"m", a.members.size()},
                        {"abs_degree", a.abs_degree},
                        {"abs_monodromy",
                         {{"class", to_string(a.abs_monodromy.classification)}, {"domain", a.abs_monodromy.domain}}},
                        {"heuristic", a.heuristic}});
  return j;
}

/// Parses a cache document. Throws usage_error on schema mismatch or
/// malformed content, so no partial report escapes.
inline AtlasReport
atlas_from_json(nlohmann::json const &j)
{
  try {
    if (!j.is_object() || !j.contains("schema_version"))
      throw usage_error("atlas cache has no schema_version");
    int const version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw usage_error("atlas cache schema_version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kSchemaVersion) + ")");
    AtlasReport r;
    r.spec = j.at("group").at("spec").get<std::string>();
    r.order = j.at("group").at("order").get<std::string>();
    for (auto const &row : j.at("components")) {
      ComponentRow c;
      c.d = row.at("d").get<std::uint64_t>();
      c.c2 = row.at("c2").get<std::uint64_t>();
      c.c3 = row.at("c3").get<std::uint64_t>();
      c.minus_i = row.at("minus_i").get<bool>();
      c.cusp_widths = row.at("cusp_widths").get<std::vector<std::uint64_t>>();
      c.genus = row.at("genus").get<std::uint64_t>();
      c.level = row.at("level").get<std::uint64_t>();
      auto const &h = row.at("higman");
      c.higman = {h.at("order").get<std::uint64_t>(), h.at("class_size").get<std::uint64_t>(),
                  h.at("label").get<std::string>()};
      auto const &cg = row.at("congruence");
      c.congruence.e = cg.at("e").get<std::uint64_t>();
      c.congruence.f = cg.at("f").get<std::uint64_t>();
      c.congruence.verdict = verdict_from_string(cg.at("verdict").get<std::string>());
      c.congruence.certificates = cg.at("certificates").get<std::vector<std::string>>();
      auto const &m = row.at("monodromy");
      c.monodromy = {altsym_from_string(m.at("class").get<std::string>()), m.at("domain").get<std::uint64_t>()};
      r.components.push_back(std::move(c));
    }
    if (j.contains("abs"))
      for (auto const &a : j.at("abs")) {
        AbsRow row;
        row.members = a.at("members").get<std::vector<std::uint64_t>>();
        row.abs_degree = a.at("abs_degree").get<std::uint64_t>();
        auto const &m = a.at("abs_monodromy");
        row.abs_monodromy = {altsym_from_string(m.at("class").get<std::string>()),
                             m.at("domain").get<std::uint64_t>()};
        row.heuristic = a.at("heuristic").get<bool>();
        for (auto k : row.members)
          if (k >= r.components.size())
            throw usage_error("abs member index out of range");
        r.abs.push_back(std::move(row));
      }
    return r;
  } catch (nlohmann::json::exception const &e) {
    throw usage_error(std::string("malformed atlas cache: ") + e.what());
  }
}

inline void
write_atlas_json(AtlasReport const &r, std::filesystem::path const &path)
{
  std::ofstream out(path);
  if (!out)
    throw usage_error("cannot write " + path.string());
  out << to_json(r).dump(2) << '\n';
  if (!out)
    throw usage_error("write to " + path.string() + " failed");
}

inline AtlasReport
read_atlas_json(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
    throw usage_error("cannot read " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (nlohmann::json::parse_error const &e) {
    throw usage_error("cannot parse " + path.string() + ": " + e.what());
  }
  return atlas_from_json(j);
}

inline AtlasReport
cache_roundtrip(AtlasReport const &r, std::filesystem::path const &path)
{
  write_atlas_json(r, path);
  return read_atlas_json(path);
}

/// Cache file name for a (spec, cap) pair inside a cache directory.
inline std::filesystem::path
cache_path(std::filesystem::path const &dir, std::string const &spec, std::uint64_t cap)
{
  std::string name;
  for (char ch : spec)
    name += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  detail::Fnv1a h;
  for (char ch : spec)
    h.add(static_cast<std::uint32_t>(static_cast<unsigned char>(ch)));
  h.add(static_cast<std::uint32_t>(cap));
  std::ostringstream os;
  os << name << '-' << std::hex << h.value() << ".json";
  return dir / os.str();
}

// ---------------------------------------------------------------- tables

/// "2 3^2 5": ascending widths, repeated values as exponents.
inline std::string
format_widths(std::vector<std::uint64_t> const &w)
{
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i])
      ++j;
    if (i > 0)
      os << ' ';
    os << w[i];
    if (j - i > 1)
      os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

inline std::string
format_monodromy(MonodromyField const &m)
{
  switch (m.classification) {
  case AltSym::Alt:
    return "A" + std::to_string(m.domain);
  case AltSym::Sym:
    return "S" + std::to_string(m.domain);
  case AltSym::Other:
    return "other(" + std::to_string(m.domain) + ")";
  }
  return "?";
}

inline std::string
format_verdict(CongruenceField const &c)
{
  switch (c.verdict) {
  case Verdict::Congruence:
    return "cng";
  case Verdict::Noncongruence:
    return "ncng";
  case Verdict::SkippedCap:
    return c.certificates.empty() ? "?" : "ncng*";
  }
  return "?";
}

inline char const *kLabelNote =
    "Higman labels are assigned by this tool (classes sorted by element order, class size, least element). "
    "Only element orders and class sizes are comparable with other tables.";

/// One row per abs component, sorted by (d, Higman labels, first member).
inline std::string
to_markdown(AtlasReport const &r)
{
  bool const heuristic = any_heuristic(r);
  std::ostringstream os;
  os << "# " << r.spec << " (order " << r.order << ")\n\n";
  if (r.components.empty()) {
    os << "Not 2-generated: no components.\n";
    return os.str();
  }

  struct Line
  {
    std::uint64_t d;
    std::string hig;
    std::uint64_t first;
    std::string text;
  };
  std::vector<Line> lines;
  for (auto const &a : r.abs) {
    auto const &c = r.components[a.members.front()];
    std::set<std::string> labels;
    for (auto k : a.members)
      labels.insert(r.components[k].higman.label);
    std::string hig;
    for (auto const &l : labels)
      hig += (hig.empty() ? "" : ",") + l;
    std::ostringstream row;
    row << "| " << a.members.size() << " | " << c.d << " | " << c.c2 << " | " << c.c3 << " | "
        << (c.minus_i ? "yes" : "no") << " | " << format_widths(c.cusp_widths) << " | " << c.genus << " | " << hig
        << " | " << format_monodromy(a.abs_monodromy) << " | " << format_verdict(c.congruence) << " |\n";
    lines.push_back({c.d, hig, a.members.front(), row.str()});
  }
  std::sort(lines.begin(), lines.end(), [](Line const &a, Line const &b) {
    return std::tie(a.d, a.hig, a.first) < std::tie(b.d, b.hig, b.first);
  });

  os << "| " << (heuristic ? "components" : "m")
     << " | d | c2 | c3 | -I | cusp widths | g | Hig | AbsMon | c/nc |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (auto const &l : lines)
    os << l.text;
  os << '\n' << kLabelNote << '\n';
  if (heuristic)
    os << "No automorphisms were supplied: rows group components with equal signature and Higman order, and "
          "AbsMon is the monodromy of one member.\n";
  if (std::any_of(r.components.begin(), r.components.end(),
                  [](ComponentRow const &c) { return c.congruence.verdict == Verdict::SkippedCap; }))
    os << "ncng* marks rows above the congruence cap whose noncongruence rests on a certificate; ? marks rows "
          "above the cap without one.\n";
  return os.str();
}

inline std::string
to_csv(AtlasReport const &r)
{
  std::ostringstream os;
  os << "id,d,c2,c3,minus_i,cusp_widths,genus,level,higman_order,higman_class_size,higman_label,e,f,verdict,"
        "certificates,monodromy_class,monodromy_domain\n";
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    auto const &c = r.components[i];
    std::string widths, certs;
    for (auto w : c.cusp_widths)
      widths += (widths.empty() ? "" : " ") + std::to_string(w);
    for (auto const &s : c.congruence.certificates)
      certs += (certs.empty() ? "" : ";") + s;
    os << i << ',' << c.d << ',' << c.c2 << ',' << c.c3 << ',' << (c.minus_i ? "true" : "false") << ",\"" << widths
       << "\"," << c.genus << ',' << c.level << ',' << c.higman.order << ',' << c.higman.class_size << ','
       << c.higman.label << ',' << c.congruence.e << ',' << c.congruence.f << ','
       << to_string(c.congruence.verdict) << ",\"" << certs << "\"," << to_string(c.monodromy.classification)
       << ',' << c.monodromy.domain << '\n';
  }
  return os.str();
}

} // namespace gsa
