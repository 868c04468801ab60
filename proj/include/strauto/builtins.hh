#pragma once

#include "strauto/presentation.hh"

namespace strauto {

/// Built-in example presentations:
///   nat-succ          (N, succ) over a*
///   prefix            ({0,1}*, s0, s1, prefix-of) — unbounded degree
///   intermediate-tree the bounded-degree tree on {0,1}*${0,1}* with growth
///                     strictly between polynomial and exponential
///   e1, e2            words over {a,b} related when they differ only in the
///                     first 1 (resp. 2) positions — degrees 1 and 3
Presentation builtin_presentation(const std::string& name);

std::vector<std::string> builtin_names();

}  // namespace strauto
