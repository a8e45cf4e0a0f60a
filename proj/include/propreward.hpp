#pragma once

#include "propreward/campaign.hpp"
#include "propreward/dataset.hpp"
#include "propreward/equilibria.hpp"
#include "propreward/errors.hpp"
#include "propreward/generators.hpp"
#include "propreward/instance.hpp"
#include "propreward/matrix.hpp"
#include "propreward/mechanism.hpp"
#include "propreward/pne_search.hpp"
#include "propreward/poa.hpp"
#include "propreward/serialization.hpp"
#include "propreward/solvers.hpp"
#include "propreward/strategy_space.hpp"
#include "propreward/svg.hpp"
