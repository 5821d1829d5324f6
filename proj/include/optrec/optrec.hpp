#pragma once

#include "optrec/consistent.hpp"
#include "optrec/design.hpp"
#include "optrec/envelopes.hpp"
#include "optrec/errors.hpp"
#include "optrec/estimators.hpp"
#include "optrec/geometry.hpp"
#include "optrec/interval.hpp"
#include "optrec/maximize.hpp"
#include "optrec/quadrature.hpp"
#include "optrec/random.hpp"
