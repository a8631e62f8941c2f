#ifndef QWALK_QWALK_HPP
#define QWALK_QWALK_HPP

#include "qwalk/analysis.hpp"
#include "qwalk/bessel.hpp"
#include "qwalk/error.hpp"
#include "qwalk/fields.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/guided.hpp"
#include "qwalk/hamiltonian_io.hpp"
#include "qwalk/line_rates.hpp"
#include "qwalk/quantum.hpp"
#include "qwalk/random.hpp"
#include "qwalk/rates.hpp"
#include "qwalk/run_io.hpp"
#include "qwalk/swarm.hpp"

#endif  // QWALK_QWALK_HPP
