#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "chernlab/metric.hpp"

namespace chernlab {

// Scalar expression over z1..zn and their conjugates.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+') factor | base ('^' '-'? integer)?
//   base   := number | 'i' | 'z' index | fn '(' expr ')' | '(' expr ')'
//   fn     := conj | abs2 | exp | log | re | im
class Expression {
 public:
  struct Node;

  Expression() = default;
  explicit Expression(std::shared_ptr<const Node> root, int max_variable)
      : root_(std::move(root)), max_variable_(max_variable) {}

  Complex evaluate(const ComplexVector& z) const;
  // Highest variable index referenced (1-based), 0 if none.
  int max_variable() const { return max_variable_; }
  bool empty() const { return root_ == nullptr; }

 private:
  std::shared_ptr<const Node> root_;
  int max_variable_ = 0;
};

// Throws Error(ParseError) with "line L, column C" in the message.
Expression parse_expression(std::string_view source, int line_offset = 0);

// Parses a metric table of "g[i][j] = <expr>" lines (1-based indices, ';' or
// newline separated, '#' comments). Omitted lower-triangle entries default to
// the conjugate of the mirrored entry. For n = 1 a bare expression is
// accepted as g[1][1].
ChartedHermitianMetric parse_metric_expression(std::string_view source, int n,
                                               std::optional<Domain> domain = std::nullopt);

}  // namespace chernlab
