#pragma once

#include "triwalk/asymptotics_phi.hpp"
#include "triwalk/asymptotics_rho.hpp"
#include "triwalk/coin.hpp"
#include "triwalk/errors.hpp"
#include "triwalk/quadrature.hpp"
#include "triwalk/spectral.hpp"
#include "triwalk/walk.hpp"
