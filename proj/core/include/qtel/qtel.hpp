#pragma once

#include "qtel/bounds.hpp"
#include "qtel/error.hpp"
#include "qtel/linalg.hpp"
#include "qtel/phases.hpp"
#include "qtel/protocol.hpp"
#include "qtel/sim.hpp"
#include "qtel/spectrum.hpp"
#include "qtel/version.hpp"
