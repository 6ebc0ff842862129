#pragma once

#include "atrs/complexity.hpp"
#include "atrs/enumerate.hpp"
#include "atrs/error.hpp"
#include "atrs/matrix.hpp"
#include "atrs/oracles.hpp"
#include "atrs/strategies.hpp"
#include "atrs/syntax.hpp"
#include "atrs/term.hpp"
#include "atrs/trs.hpp"
#include "atrs/uncurrying.hpp"
