#pragma once

#include <iosfwd>
#include <string>

#include "erbm/domain.hpp"

namespace erbm {

/// Parses the line-oriented domain spec format:
///   # comment
///   outer circle cx cy r
///   hole ellipse cx cy a b rot
///   hole fourier cx cy K reC-K imC-K ... reCK imCK
/// Exactly one `outer` statement; zero or more `hole` statements.
/// Parse errors carry 1-based line numbers.
Domain parse_domain(std::istream& in, const std::string& origin = "<stream>",
                    int node_count = 256);
Domain parse_domain_file(const std::string& path, int node_count = 256);
Domain parse_domain_string(const std::string& text, int node_count = 256);

std::string format_domain(const Domain& domain);

}  // namespace erbm
