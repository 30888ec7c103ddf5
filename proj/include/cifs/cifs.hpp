#pragma once

#include "cifs/cloud.hpp"
#include "cifs/cloud_io.hpp"
#include "cifs/curve.hpp"
#include "cifs/digits.hpp"
#include "cifs/envelope.hpp"
#include "cifs/error.hpp"
#include "cifs/estimator.hpp"
#include "cifs/formulas.hpp"
#include "cifs/geometry.hpp"
#include "cifs/maps.hpp"
#include "cifs/parabolic.hpp"
#include "cifs/pressure.hpp"
#include "cifs/report.hpp"
#include "cifs/spec.hpp"
#include "cifs/spec_json.hpp"
#include "cifs/systems.hpp"
#include "cifs/tails.hpp"
#include "cifs/validate.hpp"
