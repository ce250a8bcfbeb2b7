#pragma once

#include "milnorkit/analytic_map.hpp"
#include "milnorkit/corpus.hpp"
#include "milnorkit/dual.hpp"
#include "milnorkit/error.hpp"
#include "milnorkit/expression.hpp"
#include "milnorkit/generators.hpp"
#include "milnorkit/linalg.hpp"
#include "milnorkit/loja.hpp"
#include "milnorkit/map_json.hpp"
#include "milnorkit/milnor.hpp"
#include "milnorkit/random.hpp"
#include "milnorkit/region.hpp"
#include "milnorkit/report_json.hpp"
#include "milnorkit/spectra.hpp"
#include "milnorkit/verify.hpp"
