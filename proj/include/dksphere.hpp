#pragma once

#include "dksphere/closed_form.hpp"
#include "dksphere/errors.hpp"
#include "dksphere/format.hpp"
#include "dksphere/hypergeometric.hpp"
#include "dksphere/integrator.hpp"
#include "dksphere/jet.hpp"
#include "dksphere/polynomial.hpp"
#include "dksphere/radial_model.hpp"
#include "dksphere/rational.hpp"
#include "dksphere/spectral_oracle.hpp"
#include "dksphere/spectrum.hpp"
#include "dksphere/suite.hpp"
#include "dksphere/verification.hpp"
