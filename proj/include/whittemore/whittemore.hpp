#pragma once

#include "whittemore/csv.hpp"
#include "whittemore/distribution.hpp"
#include "whittemore/error.hpp"
#include "whittemore/estimate.hpp"
#include "whittemore/form.hpp"
#include "whittemore/identify.hpp"
#include "whittemore/interpreter.hpp"
#include "whittemore/model.hpp"
#include "whittemore/parser.hpp"
#include "whittemore/printer.hpp"
#include "whittemore/query.hpp"
#include "whittemore/render.hpp"
#include "whittemore/session.hpp"
#include "whittemore/simplify.hpp"
#include "whittemore/value.hpp"
#include "whittemore/variable.hpp"
