#pragma once

#include "txmev/ast.hpp"
#include "txmev/cli.hpp"
#include "txmev/economics.hpp"
#include "txmev/knowledge.hpp"
#include "txmev/lang.hpp"
#include "txmev/mev.hpp"
#include "txmev/names.hpp"
#include "txmev/report.hpp"
#include "txmev/scenario.hpp"
#include "txmev/semantics.hpp"
#include "txmev/state.hpp"
#include "txmev/value.hpp"
