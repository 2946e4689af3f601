#pragma once

#include "consensus/certificates.hpp"
#include "consensus/coupling.hpp"
#include "consensus/errors.hpp"
#include "consensus/linalg.hpp"
#include "consensus/matrix.hpp"
#include "consensus/simulator.hpp"
#include "consensus/spectral.hpp"
