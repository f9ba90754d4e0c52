#pragma once

#include "emvkit/core.hpp"
#include "emvkit/mv_term.hpp"
#include "emvkit/mv_core.hpp"
#include "emvkit/emv_algebra.hpp"
#include "emvkit/emv_checks.hpp"
#include "emvkit/morphism.hpp"
#include "emvkit/builtins.hpp"
#include "emvkit/congruence.hpp"
#include "emvkit/category.hpp"
#include "emvkit/free.hpp"
#include "emvkit/suite.hpp"
#include "emvkit/doc.hpp"
