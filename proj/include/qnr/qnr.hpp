#pragma once

// Umbrella header.

#include "qnr/baseline.hpp"
#include "qnr/circuit.hpp"
#include "qnr/circuit_json.hpp"
#include "qnr/error.hpp"
#include "qnr/lower.hpp"
#include "qnr/numtheory.hpp"
#include "qnr/parity_network.hpp"
#include "qnr/qasm.hpp"
#include "qnr/sampling.hpp"
#include "qnr/statevector.hpp"
#include "qnr/stats.hpp"
#include "qnr/synth.hpp"
#include "qnr/unitary.hpp"
