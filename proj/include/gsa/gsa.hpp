#pragma once

#include "atlas.hpp"
#include "congruence.hpp"
#include "element_table.hpp"
#include "epi.hpp"
#include "markoff.hpp"
#include "mcg.hpp"
#include "perm_group.hpp"
#include "permutation.hpp"
#include "sl2.hpp"
#include "standard_groups.hpp"
#include "util.hpp"
