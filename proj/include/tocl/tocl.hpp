#pragma once

#include "tocl/truth_value.hpp"
#include "tocl/error.hpp"
#include "tocl/value.hpp"
#include "tocl/schema.hpp"
#include "tocl/ast.hpp"
#include "tocl/lexer.hpp"
#include "tocl/parser.hpp"
#include "tocl/printer.hpp"
#include "tocl/checker.hpp"
#include "tocl/artifact_graph.hpp"
#include "tocl/operators.hpp"
#include "tocl/eval_tree.hpp"
#include "tocl/scope_index.hpp"
#include "tocl/engine.hpp"
#include "tocl/patterns.hpp"
#include "tocl/oracle.hpp"
#include "tocl/io.hpp"
#include "tocl/replay.hpp"
#include "tocl/workload.hpp"
