#pragma once

#include "plpo/certificate.hpp"
#include "plpo/interpretation.hpp"
#include "plpo/orders.hpp"
#include "plpo/orientation.hpp"
#include "plpo/parser.hpp"
#include "plpo/precedence.hpp"
#include "plpo/rewrite.hpp"
#include "plpo/schema.hpp"
#include "plpo/term.hpp"
