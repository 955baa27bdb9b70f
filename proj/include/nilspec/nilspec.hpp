#pragma once

#include "nilspec/canonical.hpp"
#include "nilspec/errors.hpp"
#include "nilspec/families.hpp"
#include "nilspec/group.hpp"
#include "nilspec/intlin.hpp"
#include "nilspec/io.hpp"
#include "nilspec/morphism.hpp"
#include "nilspec/oracle.hpp"
#include "nilspec/polynomial.hpp"
#include "nilspec/reidemeister.hpp"
