#pragma once

#include "wctlab/space.hpp"
#include "wctlab/operator.hpp"
#include "wctlab/hermitian.hpp"
#include "wctlab/cond_exp.hpp"
#include "wctlab/wct.hpp"
#include "wctlab/spectrum.hpp"
#include "wctlab/generator.hpp"
#include "wctlab/verify.hpp"
#include "wctlab/examples.hpp"
#include "wctlab/io.hpp"
#include "wctlab/records.hpp"
