#pragma once

// Umbrella header for the spikeloop library: hybrid simulation of a leaky
// integrate-and-fire spiking controller in closed loop with an LTI plant,
// plus design and certification of its practical-stability guarantees.

#include "spikeloop/analysis/certificate.hpp"
#include "spikeloop/analysis/certify.hpp"
#include "spikeloop/analysis/closed_form.hpp"
#include "spikeloop/errors.hpp"
#include "spikeloop/hybrid/options.hpp"
#include "spikeloop/hybrid/solver.hpp"
#include "spikeloop/hybrid/state.hpp"
#include "spikeloop/hybrid/system.hpp"
#include "spikeloop/hybrid/time.hpp"
#include "spikeloop/hybrid/trace.hpp"
#include "spikeloop/lif/builtin.hpp"
#include "spikeloop/lif/loop.hpp"
#include "spikeloop/lif/params.hpp"
#include "spikeloop/lif/scenario.hpp"
#include "spikeloop/signals/piecewise_linear.hpp"
#include "spikeloop/version.hpp"
