#pragma once

#include "kyoto/bounds.hpp"
#include "kyoto/codec.hpp"
#include "kyoto/core.hpp"
#include "kyoto/covering.hpp"
#include "kyoto/encoder.hpp"
#include "kyoto/enumerate.hpp"
#include "kyoto/external.hpp"
#include "kyoto/oracle.hpp"
#include "kyoto/partitions.hpp"
#include "kyoto/reference.hpp"
#include "kyoto/search.hpp"
#include "kyoto/solver.hpp"
