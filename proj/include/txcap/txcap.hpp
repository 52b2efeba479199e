#pragma once

#include "txcap/capacity.hpp"
#include "txcap/csv.hpp"
#include "txcap/errors.hpp"
#include "txcap/figures.hpp"
#include "txcap/mc.hpp"
#include "txcap/numerics.hpp"
#include "txcap/scenario.hpp"
#include "txcap/stable.hpp"
