#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "milnorkit/error.hpp"

namespace milnorkit {

/// Immutable polynomial expression tree: constants, coordinate variables,
/// n-ary sums and products, negation, and natural-number powers.
///
/// Nodes are shared, never mutated, so substitution (composition) builds a
/// DAG without copying subtrees. Evaluation walks children left to right and
/// does no simplification, which keeps results bit-reproducible.
class Expr {
 public:
  enum class Kind { constant, variable, sum, product, negation, power };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double value) {
    if (!std::isfinite(value)) throw InputError("Expr::constant: non-finite value");
    return Expr(std::make_shared<const Node>(Node{Kind::constant, value, 0, 0, {}}));
  }
  static Expr variable(std::size_t index) {
    return Expr(std::make_shared<const Node>(Node{Kind::variable, 0.0, index, 0, {}}));
  }
  static Expr sum(std::vector<Expr> terms) {
    return Expr(std::make_shared<const Node>(Node{Kind::sum, 0.0, 0, 0, std::move(terms)}));
  }
  static Expr product(std::vector<Expr> factors) {
    return Expr(std::make_shared<const Node>(Node{Kind::product, 0.0, 0, 0, std::move(factors)}));
  }
  static Expr negate(Expr e) {
    return Expr(std::make_shared<const Node>(Node{Kind::negation, 0.0, 0, 0, {std::move(e)}}));
  }
  static Expr power(Expr base, std::uint32_t exponent) {
    return Expr(std::make_shared<const Node>(Node{Kind::power, 0.0, 0, exponent, {std::move(base)}}));
  }

  Kind kind() const noexcept { return node_->kind; }
  double value() const noexcept { return node_->value; }
  std::size_t index() const noexcept { return node_->index; }
  std::uint32_t exponent() const noexcept { return node_->exponent; }
  std::span<const Expr> children() const noexcept { return node_->children; }

  /// Largest variable index referenced, or nullopt for a variable-free tree.
  std::optional<std::size_t> max_variable() const {
    if (kind() == Kind::variable) return index();
    std::optional<std::size_t> best;
    for (const Expr& c : children()) {
      auto m = c.max_variable();
      if (m && (!best || *m > *best)) best = m;
    }
    return best;
  }

  /// Evaluates over any ring-like scalar that lifts from double (double, Dual).
  template <class T>
  T evaluate(std::span<const T> vars) const {
    switch (kind()) {
      case Kind::constant:
        return T(value());
      case Kind::variable:
        if (index() >= vars.size()) throw InputError("Expr::evaluate: variable index out of range");
        return vars[index()];
      case Kind::sum: {
        if (children().empty()) return T(0.0);
        T acc = children()[0].evaluate(vars);
        for (std::size_t i = 1; i < children().size(); ++i) acc = acc + children()[i].evaluate(vars);
        return acc;
      }
      case Kind::product: {
        if (children().empty()) return T(1.0);
        T acc = children()[0].evaluate(vars);
        for (std::size_t i = 1; i < children().size(); ++i) acc = acc * children()[i].evaluate(vars);
        return acc;
      }
      case Kind::negation:
        return -children()[0].evaluate(vars);
      case Kind::power:
        return integer_power(children()[0].evaluate(vars), exponent());
    }
    return T(0.0);
  }

  /// Replaces variable i by replacements[i] throughout the tree.
  Expr substitute(std::span<const Expr> replacements) const {
    switch (kind()) {
      case Kind::constant:
        return *this;
      case Kind::variable:
        if (index() >= replacements.size()) throw InputError("Expr::substitute: variable index out of range");
        return replacements[index()];
      case Kind::negation:
        return negate(children()[0].substitute(replacements));
      case Kind::power:
        return power(children()[0].substitute(replacements), exponent());
      case Kind::sum:
      case Kind::product: {
        std::vector<Expr> out;
        out.reserve(children().size());
        for (const Expr& c : children()) out.push_back(c.substitute(replacements));
        return kind() == Kind::sum ? sum(std::move(out)) : product(std::move(out));
      }
    }
    return *this;
  }

  /// Adds `offset` to every variable index (used to place a map in a variable block).
  Expr shift_variables(std::size_t offset) const {
    if (kind() == Kind::constant) return *this;
    if (kind() == Kind::variable) return variable(index() + offset);
    std::vector<Expr> out;
    out.reserve(children().size());
    for (const Expr& c : children()) out.push_back(c.shift_variables(offset));
    switch (kind()) {
      case Kind::negation: return negate(out[0]);
      case Kind::power: return power(out[0], exponent());
      case Kind::sum: return sum(std::move(out));
      default: return product(std::move(out));
    }
  }

  /// Structural equality; constants compare bitwise-equal (so -0 != +0).
  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::constant:
        return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
      case Kind::variable:
        return a.index() == b.index();
      case Kind::power:
        if (a.exponent() != b.exponent()) return false;
        break;
      default:
        break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
      if (!(a.children()[i] == b.children()[i])) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind;
    double value;
    std::size_t index;
    std::uint32_t exponent;
    std::vector<Expr> children;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  // Square-and-multiply; x^0 == 1 for every x, including 0.
  template <class T>
  static T integer_power(const T& base, std::uint32_t e) {
    if (e == 0) return T(1.0);
    std::optional<T> result;
    T sq = base;
    while (true) {
      if (e & 1u) result = result ? *result * sq : sq;
      e >>= 1;
      if (e == 0) break;
      sq = sq * sq;
    }
    return *result;
  }

  std::shared_ptr<const Node> node_;
};

inline Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
inline Expr operator-(const Expr& a) { return Expr::negate(a); }
inline Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::negate(b)}); }
inline Expr operator*(double c, const Expr& e) { return Expr::product({Expr::constant(c), e}); }

}  // namespace milnorkit
