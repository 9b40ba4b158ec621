#pragma once

#include "hartree5d/classifier.hpp"
#include "hartree5d/evolution.hpp"
#include "hartree5d/functionals.hpp"
#include "hartree5d/ground_state.hpp"
#include "hartree5d/newton_potential.hpp"
#include "hartree5d/oracle.hpp"
#include "hartree5d/potentials.hpp"
#include "hartree5d/probes.hpp"
#include "hartree5d/radial_grid.hpp"
#include "hartree5d/tridiagonal.hpp"
