#include "chernlab/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

#include "chernlab/error.hpp"

namespace chernlab {

struct Expression::Node {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Conj, Abs2, Exp, Log, Re, Im };
  Op op = Op::Const;
  Complex value{};
  int index = 0;  // variable index (0-based) or integer exponent
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Complex eval(const Node& n, const ComplexVector& z) {
  using Op = Node::Op;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (n.index >= z.size()) throw Error(ErrorKind::DimensionMismatch, "expression references z" + std::to_string(n.index + 1));
      return z(n.index);
    case Op::Add: return eval(*n.a, z) + eval(*n.b, z);
    case Op::Sub: return eval(*n.a, z) - eval(*n.b, z);
    case Op::Mul: return eval(*n.a, z) * eval(*n.b, z);
    case Op::Div: return eval(*n.a, z) / eval(*n.b, z);
    case Op::Neg: return -eval(*n.a, z);
    case Op::Pow: {
      const Complex base = eval(*n.a, z);
      Complex r(1.0, 0.0);
      const int e = std::abs(n.index);
      for (int k = 0; k < e; ++k) r *= base;
      return n.index < 0 ? Complex(1.0, 0.0) / r : r;
    }
    case Op::Conj: return std::conj(eval(*n.a, z));
    case Op::Abs2: return Complex(std::norm(eval(*n.a, z)), 0.0);
    case Op::Exp: return std::exp(eval(*n.a, z));
    case Op::Log: return std::log(eval(*n.a, z));
    case Op::Re: return Complex(eval(*n.a, z).real(), 0.0);
    case Op::Im: return Complex(eval(*n.a, z).imag(), 0.0);
  }
  return {};
}

class Parser {
 public:
  Parser(std::string_view src, int line_offset) : src_(src), line_offset_(line_offset) {}

  Expression parse_all() {
    NodePtr root = expr();
    skip_ws();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return Expression(root, max_var_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1 + line_offset_, col = 1;
    for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << msg;
    throw Error(ErrorKind::ParseError, os.str());
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Node::Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Op::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = make(Node::Op::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (accept('-')) return make(Node::Op::Neg, factor());
    if (accept('+')) return factor();
    NodePtr b = base();
    if (accept('^')) {
      skip_ws();
      bool negative = accept('-');
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be an integer");
      auto n = std::make_shared<Node>();
      n->op = Node::Op::Pow;
      n->a = b;
      n->index = std::stoi(std::string(src_.substr(start, pos_ - start))) * (negative ? -1 : 1);
      return n;
    }
    return b;
  }

  NodePtr base() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string word(src_.substr(start, pos_ - start));
      if (word[0] == 'z' && word.size() > 1 &&
          word.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int idx = std::stoi(word.substr(1));
        if (idx < 1) {
          pos_ = start;
          fail("variable indices start at 1");
        }
        max_var_ = std::max(max_var_, idx);
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Var;
        n->index = idx - 1;
        return n;
      }
      if (word == "i") {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Const;
        n->value = Complex(0.0, 1.0);
        return n;
      }
      static const std::map<std::string, Node::Op> fns{{"conj", Node::Op::Conj}, {"abs2", Node::Op::Abs2},
                                                       {"exp", Node::Op::Exp},   {"log", Node::Op::Log},
                                                       {"re", Node::Op::Re},     {"im", Node::Op::Im}};
      const auto it = fns.find(word);
      if (it == fns.end()) {
        pos_ = start;
        fail("unknown identifier '" + word + "'");
      }
      expect('(');
      NodePtr arg = expr();
      expect(')');
      return make(it->second, arg);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(src_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Const;
    n->value = Complex(v, 0.0);
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_offset_ = 0;
  int max_var_ = 0;
};

std::vector<ComplexVector> probe_points(const Domain& domain, int n) {
  const ComplexVector c = domain.center_point(n);
  std::vector<ComplexVector> pts{c};
  const double rho = domain.probe_radius();
  for (double frac : {0.45, 0.85}) {
    for (int axis = 0; axis < 2 * n; ++axis) {
      for (double sgn : {-1.0, 1.0}) {
        ComplexVector w = c;
        const int i = axis / 2;
        w(i) += axis % 2 == 0 ? Complex(sgn * frac * rho, 0.0) : Complex(0.0, sgn * frac * rho);
        if (domain.contains(w)) pts.push_back(w);
      }
    }
    ComplexVector diag = c;
    for (int i = 0; i < n; ++i) diag(i) += Complex(0.6, 0.3) * (frac * rho / std::sqrt(0.45 * n));
    if (domain.contains(diag)) pts.push_back(diag);
  }
  return pts;
}

}  // namespace

Complex Expression::evaluate(const ComplexVector& z) const {
  if (!root_) throw Error(ErrorKind::ParseError, "empty expression");
  return eval(*root_, z);
}

Expression parse_expression(std::string_view source, int line_offset) {
  Parser p(source, line_offset);
  return p.parse_all();
}

ChartedHermitianMetric parse_metric_expression(std::string_view source, int n, std::optional<Domain> domain) {
  if (n < 1) throw Error(ErrorKind::DimensionError, "metric expression dimension must be positive");

  // Split into statements, tracking the source line of each.
  std::vector<std::pair<std::string, int>> statements;
  {
    std::string cur;
    int line = 0, cur_line = 0;
    bool comment = false;
    for (char c : source) {
      if (c == '\n' || c == ';') {
        if (cur.find_first_not_of(" \t\r") != std::string::npos) statements.emplace_back(cur, cur_line);
        cur.clear();
        comment = false;
        if (c == '\n') ++line;
        cur_line = line;
        continue;
      }
      if (c == '#') comment = true;
      if (!comment) cur.push_back(c);
    }
    if (cur.find_first_not_of(" \t\r") != std::string::npos) statements.emplace_back(cur, cur_line);
  }
  if (statements.empty()) throw Error(ErrorKind::ParseError, "line 1, column 1: empty metric table");

  std::vector<std::vector<std::optional<Expression>>> table(n, std::vector<std::optional<Expression>>(n));
  for (const auto& [text, line] : statements) {
    const auto first = text.find_first_not_of(" \t\r");
    const bool is_entry = text.compare(first, 2, "g[") == 0;
    if (!is_entry) {
      if (n != 1 || statements.size() != 1) {
        std::ostringstream os;
        os << "line " << line + 1 << ", column " << first + 1 << ": expected 'g[i][j] = <expr>'";
        throw Error(ErrorKind::ParseError, os.str());
      }
      table[0][0] = parse_expression(text, line);
      continue;
    }
    int i = 0, j = 0;
    char tail = 0;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos ||
        std::sscanf(text.c_str() + first, "g[%d][%d] %c", &i, &j, &tail) != 3 || tail != '=') {
      std::ostringstream os;
      os << "line " << line + 1 << ", column " << first + 1 << ": malformed entry header";
      throw Error(ErrorKind::ParseError, os.str());
    }
    if (i < 1 || j < 1 || i > n || j > n) {
      std::ostringstream os;
      os << "line " << line + 1 << ", column " << first + 1 << ": index out of range for n = " << n;
      throw Error(ErrorKind::ParseError, os.str());
    }
    // Offsets inside the expression are reported relative to its own start.
    table[i - 1][j - 1] = parse_expression(std::string_view(text).substr(eq + 1), line);
  }
  for (int i = 0; i < n; ++i) {
    if (!table[i][i]) {
      throw Error(ErrorKind::ParseError, "missing diagonal entry g[" + std::to_string(i + 1) + "][" +
                                             std::to_string(i + 1) + "]");
    }
    for (int j = 0; j < n; ++j) {
      if (table[i][j] && table[i][j]->max_variable() > n) {
        throw Error(ErrorKind::ParseError, "entry g[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                                               "] references a variable beyond z" + std::to_string(n));
      }
    }
  }

  auto raw_eval = [table, n](const ComplexVector& z) -> ComplexMatrix {
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (table[i][j]) {
          g(i, j) = table[i][j]->evaluate(z);
        } else if (i > j && table[j][i]) {
          g(i, j) = std::conj(table[j][i]->evaluate(z));
        }
      }
    return g;
  };

  const Domain dom = domain.value_or(Domain::ball(1.0));
  double worst_residue = 0.0;
  const std::vector<ComplexVector> probes = probe_points(dom, n);
  for (const ComplexVector& p : probes) {
    const ComplexMatrix g = raw_eval(p);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      const Complex v = g.data()[k];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw Error(ErrorKind::EvaluationDomainError, "metric expression is singular inside the domain");
      }
    }
    worst_residue = std::max(worst_residue, ((g - g.adjoint()) * 0.5).cwiseAbs().maxCoeff());
    if (worst_residue > 1e-4) {
      throw Error(ErrorKind::NonHermitianExpression, "metric table is not Hermitian (residue " +
                                                         std::to_string(worst_residue) + ")");
    }
  }
  for (const ComplexVector& p : probes) {
    if (!HermitianForm(raw_eval(p)).is_positive_definite()) {
      throw Error(ErrorKind::EvaluationDomainError, "metric expression is not positive-definite inside the domain");
    }
  }

  auto symmetrized = [raw_eval](const ComplexVector& z) -> ComplexMatrix {
    const ComplexMatrix g = raw_eval(z);
    return (g + g.adjoint()) * 0.5;
  };
  ChartedHermitianMetric m(n, dom, symmetrized, "custom", KahlerFlag::Unknown);
  if (worst_residue > 1e-8) {
    m.add_warning("Hermitian residue " + std::to_string(worst_residue) + " on the probe grid was symmetrized away");
  }
  return m;
}

}  // namespace chernlab
