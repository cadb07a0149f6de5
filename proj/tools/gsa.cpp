#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gsa/gsa.hpp"

namespace
{

enum ExitCode
{
  kOk = 0,
  kUsage = 2,
  kCap = 3,
  kConsistency = 4
};

struct AtlasArgs
{
  std::string group;
  std::uint64_t cap = gsa::kDefaultCongruenceCap;
  std::string format = "md";
  std::string out;
  std::string cache;
  unsigned threads = gsa::default_threads();
  std::size_t max_order = gsa::AtlasConfig{}.max_order;
};

struct MarkoffArgs
{
  std::uint64_t p = 0;
  std::string range;
  bool crosscheck = false;
  unsigned threads = gsa::default_threads();
};

struct EpiArgs
{
  std::string group;
  bool list = false;
  unsigned threads = gsa::default_threads();
};

void
emit(std::string const &text, std::string const &out)
{
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw gsa::usage_error("cannot write " + out);
  f << text;
}

int
run_atlas_cmd(AtlasArgs const &a)
{
  gsa::AtlasConfig cfg;
  cfg.congruence_cap = a.cap;
  cfg.threads = a.threads;
  cfg.max_order = a.max_order;

  auto const spec = gsa::parse_group_spec(a.group);
  gsa::AtlasReport rep;
  std::filesystem::path cached;
  if (!a.cache.empty()) {
    std::filesystem::create_directories(a.cache);
    cached = gsa::cache_path(a.cache, a.group, a.cap);
  }
  if (!cached.empty() && std::filesystem::exists(cached)) {
    rep = gsa::read_atlas_json(cached);
    if (rep.spec != a.group)
      throw gsa::usage_error("cache file " + cached.string() + " belongs to another group");
  } else {
    rep = gsa::run_atlas(spec, cfg);
    if (!cached.empty())
      gsa::write_atlas_json(rep, cached);
  }

  if (a.format == "md")
    emit(gsa::to_markdown(rep), a.out);
  else if (a.format == "csv")
    emit(gsa::to_csv(rep), a.out);
  else
    emit(gsa::to_json(rep).dump(2) + "\n", a.out);
  return kOk;
}

int
run_markoff_cmd(MarkoffArgs const &a)
{
  if ((a.p == 0) == a.range.empty())
    throw gsa::usage_error("give exactly one of --p and --p-range");

  if (a.p != 0) {
    auto const r = gsa::markoff_orbits(a.p, a.threads);
    std::cout << "p: " << r.p << "\npoints: " << r.point_count << "\nout orbit sizes:";
    for (auto s : r.out_orbit_sizes)
      std::cout << ' ' << s;
    std::cout << "\nout+ orbit sizes:";
    for (auto s : r.out_plus_orbit_sizes)
      std::cout << ' ' << s;
    std::cout << "\ntransitive: " << (r.transitive_out ? "yes" : "no")
              << "\ndivisibility: " << (r.divisibility_ok ? "ok" : "fails") << '\n';
    if (a.p > 3) {
      auto const sa = gsa::strong_approximation_report(a.p, a.threads);
      std::cout << "strong approximation: " << (sa.holds ? "yes" : "no") << " (" << sa.narrative << ")\n";
    }
    if (a.crosscheck) {
      auto const c = gsa::crosscheck_epi_bijection(a.p, a.threads);
      std::cout << "crosscheck: markoff " << c.markoff_count << ", epi trace -2 " << c.epi_trace_count << " ("
                << (c.markoff_count == c.epi_trace_count ? "match" : "MISMATCH") << ")\n";
    }
    return kOk;
  }

  auto const dots = a.range.find("..");
  if (dots == std::string::npos)
    throw gsa::usage_error("--p-range expects A..B");
  std::uint64_t lo = 0, hi = 0;
  try {
    lo = std::stoull(a.range.substr(0, dots));
    hi = std::stoull(a.range.substr(dots + 2));
  } catch (std::exception const &) {
    throw gsa::usage_error("--p-range expects A..B");
  }
  std::cout << "p,point_count,n_orbits_out,n_orbits_out_plus,max_orbit,transitive,divisibility_ok";
  if (a.crosscheck)
    std::cout << ",epi_trace_count";
  std::cout << '\n';
  for (std::uint64_t p = lo; p <= hi; ++p) {
    if (p == 2 || !gsa::detail::is_prime(p))
      continue;
    auto const r = gsa::markoff_orbits(p, a.threads);
    std::cout << p << ',' << r.point_count << ',' << r.out_orbit_sizes.size() << ','
              << r.out_plus_orbit_sizes.size() << ',' << r.max_orbit() << ',' << (r.transitive_out ? "true" : "false")
              << ',' << (r.divisibility_ok ? "true" : "false");
    if (a.crosscheck)
      std::cout << ',' << gsa::crosscheck_epi_bijection(p, a.threads).epi_trace_count;
    std::cout << '\n';
  }
  return kOk;
}

int
run_epi_cmd(EpiArgs const &a)
{
  auto const rg = gsa::resolve_group(a.group);
  gsa::EpiOptions opts;
  opts.threads = a.threads;
  gsa::EpiContext const ctx(rg.group, opts);
  auto const classes = ctx.enumerate(opts);
  std::cout << "# " << a.group << ": " << classes.size() << " classes of generating pairs\n";
  if (!a.list)
    return kOk;
  for (auto const &e : classes) {
    auto const [x, y] = ctx.pair(e);
    std::ostringstream hash;
    hash << std::hex << e.hash_key;
    std::cout << hash.str() << '\t' << x << '\t' << y << '\t' << ctx.higman_invariant(e).commutator_class->label
              << '\n';
  }
  return kOk;
}

} // namespace

int
main(int argc, char **argv)
{
  CLI::App app{"Components of moduli of elliptic curves with G-structures"};
  app.set_config("--config", "", "Read options from a TOML or INI file; flags override it");
  app.require_subcommand(1);

  AtlasArgs atlas;
  auto *atlas_cmd = app.add_subcommand("atlas", "Components, signatures and congruence verdicts for a group");
  atlas_cmd->add_option("--group", atlas.group, "Group spec, e.g. PSL2:7@aut=natural")->required();
  atlas_cmd->add_option("--congruence-cap", atlas.cap, "Largest modulus 2l for the exact congruence test")
      ->capture_default_str();
  atlas_cmd->add_option("--format", atlas.format, "Output format")
      ->check(CLI::IsMember({"md", "csv", "json"}))
      ->capture_default_str();
  atlas_cmd->add_option("--out", atlas.out, "Write output here instead of stdout");
  atlas_cmd->add_option("--cache", atlas.cache, "Directory for JSON result caches");
  atlas_cmd->add_option("--threads", atlas.threads, "Worker threads")->check(CLI::PositiveNumber);
  atlas_cmd->add_option("--max-order", atlas.max_order, "Refuse groups larger than this")->capture_default_str();

  MarkoffArgs markoff;
  auto *markoff_cmd = app.add_subcommand("markoff", "Orbits on the Markoff surface mod p");
  markoff_cmd->add_option("--p", markoff.p, "Odd prime");
  markoff_cmd->add_option("--p-range", markoff.range, "Sweep primes A..B, CSV output");
  markoff_cmd->add_flag("--crosscheck", markoff.crosscheck, "Compare with generating pairs of SL2(F_p)");
  markoff_cmd->add_option("--threads", markoff.threads, "Worker threads")->check(CLI::PositiveNumber);

  EpiArgs epi;
  auto *epi_cmd = app.add_subcommand("epi", "Generating pairs up to conjugation");
  epi_cmd->add_option("--group", epi.group, "Group spec")->required();
  epi_cmd->add_flag("--list", epi.list, "Print every class");
  epi_cmd->add_option("--threads", epi.threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int const rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*atlas_cmd)
      return run_atlas_cmd(atlas);
    if (*markoff_cmd)
      return run_markoff_cmd(markoff);
    return run_epi_cmd(epi);
  } catch (gsa::usage_error const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (gsa::cap_exceeded const &e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kCap;
  } catch (gsa::consistency_error const &e) {
    std::cerr << "internal consistency failure: " << e.what() << '\n';
    return kConsistency;
  }
}
