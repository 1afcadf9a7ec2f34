#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lohi/error.hpp"

namespace lohi {

enum class BondOrder : std::uint8_t { kSingle = 1, kDouble = 2, kTriple = 3, kAromatic = 4 };

struct Atom {
  std::string element;
  int charge = 0;
  bool aromatic = false;
  // Set for bracket atoms, whose hydrogen count is written out explicitly.
  std::optional<int> explicit_hydrogens;
};

struct Bond {
  std::size_t begin = 0;
  std::size_t end = 0;
  BondOrder order = BondOrder::kSingle;
};

namespace detail {

inline constexpr std::array<std::string_view, 86> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn"};

}  // namespace detail

// 1-based atomic number, or 0 for an unknown symbol.
inline int atomic_number(std::string_view symbol) {
  for (std::size_t i = 0; i < detail::kElements.size(); ++i) {
    if (detail::kElements[i] == symbol) return static_cast<int>(i) + 1;
  }
  return 0;
}

// Heavy-atom graph with implicit hydrogens. Construction validates the bond
// list (valid endpoints, no self or duplicate bonds) and connectivity.
class MolecularGraph {
 public:
  MolecularGraph() = default;

  static MolecularGraph create(std::vector<Atom> atoms, std::vector<Bond> bonds) {
    MolecularGraph g;
    g.atoms_ = std::move(atoms);
    g.bonds_ = std::move(bonds);
    g.adjacency_.assign(g.atoms_.size(), {});
    for (std::size_t b = 0; b < g.bonds_.size(); ++b) {
      const Bond& bond = g.bonds_[b];
      if (bond.begin >= g.atoms_.size() || bond.end >= g.atoms_.size()) {
        throw InputError("bond " + std::to_string(b) + " has an endpoint out of range");
      }
      if (bond.begin == bond.end) throw InputError("bond " + std::to_string(b) + " is a self-bond");
      for (const auto& [nbr, _] : g.adjacency_[bond.begin]) {
        if (nbr == bond.end) throw InputError("duplicate bond between atoms " +
                                              std::to_string(bond.begin) + " and " +
                                              std::to_string(bond.end));
      }
      g.adjacency_[bond.begin].emplace_back(bond.end, b);
      g.adjacency_[bond.end].emplace_back(bond.begin, b);
    }
    if (!g.connected()) {
      throw SmilesError(SmilesError::Kind::kDisconnected, 0, "molecular graph is disconnected");
    }
    return g;
  }

  std::size_t atom_count() const noexcept { return atoms_.size(); }
  std::size_t bond_count() const noexcept { return bonds_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  // (neighbor atom, bond index) pairs.
  const std::vector<std::pair<std::size_t, std::size_t>>& neighbors(std::size_t i) const {
    return adjacency_.at(i);
  }

  std::size_t degree(std::size_t i) const { return adjacency_.at(i).size(); }

  // Implicit H for organic-subset atoms: the smallest standard valence that
  // accommodates the bond-order sum (aromatic bonds count 1.5), minus that sum,
  // clamped at zero. Bracket atoms report their written count.
  int hydrogen_count(std::size_t i) const {
    const Atom& a = atoms_.at(i);
    if (a.explicit_hydrogens) return *a.explicit_hydrogens;
    int half_units = 0;
    for (const auto& [_, b] : adjacency_[i]) {
      const BondOrder o = bonds_[b].order;
      half_units += o == BondOrder::kAromatic ? 3 : 2 * static_cast<int>(o);
    }
    for (int valence : standard_valences(a.element)) {
      if (2 * valence >= half_units) return (2 * valence - half_units) / 2;
    }
    return 0;
  }

  static std::vector<int> standard_valences(std::string_view element) {
    if (element == "B") return {3};
    if (element == "C") return {4};
    if (element == "N" || element == "P") return {3, 5};
    if (element == "O") return {2};
    if (element == "S") return {2, 4, 6};
    if (element == "F" || element == "Cl" || element == "Br" || element == "I") return {1};
    return {};
  }

 private:
  bool connected() const {
    if (atoms_.empty()) return true;
    std::vector<bool> seen(atoms_.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [u, _] : adjacency_[v]) {
        if (!seen[u]) {
          seen[u] = true;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    return reached == atoms_.size();
  }

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
};

namespace detail {

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  MolecularGraph parse() {
    if (text_.empty()) syntax("empty SMILES");
    std::optional<std::size_t> previous;
    std::vector<std::size_t> branch_stack;
    std::optional<BondOrder> pending_bond;
    std::size_t pending_offset = 0;

    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (!previous) syntax("branch opened before any atom");
        if (pending_bond) syntax("bond symbol before branch");
        branch_stack.push_back(*previous);
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == ')') syntax("empty branch");
      } else if (c == ')') {
        if (branch_stack.empty()) syntax("unbalanced ')'");
        if (pending_bond) syntax("bond symbol not followed by an atom");
        previous = branch_stack.back();
        branch_stack.pop_back();
        ++pos_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':') {
        if (!previous) syntax("bond symbol before any atom");
        if (pending_bond) syntax("consecutive bond symbols");
        pending_bond = c == '-' ? BondOrder::kSingle
                       : c == '=' ? BondOrder::kDouble
                       : c == '#' ? BondOrder::kTriple
                                  : BondOrder::kAromatic;
        pending_offset = pos_;
        ++pos_;
      } else if (c == '/' || c == '\\') {
        unsupported("directional bond (stereochemistry)");
      } else if (c == '.') {
        unsupported("multi-fragment '.'");
      } else if (c == '$') {
        unsupported("quadruple bond '$'");
      } else if (c == '*') {
        unsupported("wildcard atom '*'");
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (!previous) syntax("ring closure before any atom");
        const std::size_t start = pos_;
        const int label = ring_label();
        ring_closure(*previous, label, pending_bond, start);
        pending_bond.reset();
      } else {
        const std::size_t start = pos_;
        const std::size_t atom = parse_atom();
        if (previous) add_bond(*previous, atom, pending_bond, pending_bond ? pending_offset : start);
        pending_bond.reset();
        previous = atom;
      }
    }
    if (pending_bond) {
      pos_ = pending_offset;
      syntax("bond symbol at end of input");
    }
    if (!branch_stack.empty()) syntax("unclosed branch '('");
    if (!open_rings_.empty()) {
      pos_ = open_rings_.begin()->second.offset;
      syntax("unclosed ring bond " + std::to_string(open_rings_.begin()->first));
    }
    return MolecularGraph::create(std::move(atoms_), std::move(bonds_));
  }

 private:
  struct OpenRing {
    std::size_t atom;
    std::optional<BondOrder> order;
    std::size_t offset;
  };

  [[noreturn]] void syntax(const std::string& what) const {
    throw SmilesError(SmilesError::Kind::kSyntax, pos_, "SMILES syntax error: " + what);
  }
  [[noreturn]] void unsupported(const std::string& feature) const {
    throw SmilesError(SmilesError::Kind::kUnsupported, pos_,
                      "unsupported SMILES feature: " + feature);
  }

  int ring_label() {
    if (text_[pos_] != '%') return text_[pos_++] - '0';
    if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
      syntax("'%' must be followed by two digits");
    }
    const int label = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
    pos_ += 3;
    return label;
  }

  void ring_closure(std::size_t atom, int label, std::optional<BondOrder> order,
                    std::size_t offset) {
    auto it = open_rings_.find(label);
    if (it == open_rings_.end()) {
      open_rings_.emplace(label, OpenRing{atom, order, offset});
      return;
    }
    const OpenRing open = it->second;
    open_rings_.erase(it);
    if (open.order && order && *open.order != *order) {
      pos_ = offset;
      syntax("conflicting bond orders on ring closure " + std::to_string(label));
    }
    add_bond(open.atom, atom, order ? order : open.order, offset);
  }

  void add_bond(std::size_t a, std::size_t b, std::optional<BondOrder> order, std::size_t offset) {
    if (a == b) {
      pos_ = offset;
      syntax("ring closure bonds an atom to itself");
    }
    for (const Bond& bond : bonds_) {
      if ((bond.begin == a && bond.end == b) || (bond.begin == b && bond.end == a)) {
        pos_ = offset;
        syntax("duplicate bond");
      }
    }
    BondOrder o = BondOrder::kSingle;
    if (order) {
      o = *order;
    } else if (atoms_[a].aromatic && atoms_[b].aromatic) {
      o = BondOrder::kAromatic;
    }
    bonds_.push_back({a, b, o});
  }

  std::size_t parse_atom() {
    const char c = text_[pos_];
    if (c == '[') return parse_bracket_atom();
    Atom atom;
    if (c == 'C' && peek(1) == 'l') {
      atom.element = "Cl";
      pos_ += 2;
    } else if (c == 'B' && peek(1) == 'r') {
      atom.element = "Br";
      pos_ += 2;
    } else if (c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P' || c == 'S' || c == 'F' ||
               c == 'I') {
      atom.element = std::string(1, c);
      ++pos_;
    } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's') {
      atom.element = std::string(1, static_cast<char>(std::toupper(c)));
      atom.aromatic = true;
      ++pos_;
    } else if (c == '@') {
      unsupported("chirality '@'");
    } else {
      syntax(std::string("unexpected character '") + c + "'");
    }
    atoms_.push_back(std::move(atom));
    return atoms_.size() - 1;
  }

  std::size_t parse_bracket_atom() {
    ++pos_;  // '['
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      unsupported("isotope");
    }
    Atom atom;
    if (pos_ >= text_.size()) syntax("unterminated bracket atom");
    const char c = text_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      // Aromatic bracket symbols: b c n o p s se as.
      if (c == 's' && peek(1) == 'e') {
        atom.element = "Se";
        pos_ += 2;
      } else if (c == 'a' && peek(1) == 's') {
        atom.element = "As";
        pos_ += 2;
      } else if (c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's') {
        atom.element = std::string(1, static_cast<char>(std::toupper(c)));
        ++pos_;
      } else {
        syntax(std::string("unknown aromatic symbol '") + c + "'");
      }
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::string two{c};
      if (std::islower(static_cast<unsigned char>(peek(1)))) two.push_back(peek(1));
      if (two.size() == 2 && atomic_number(two) != 0) {
        atom.element = two;
        pos_ += 2;
      } else if (atomic_number(std::string(1, c)) != 0) {
        atom.element = std::string(1, c);
        ++pos_;
      } else {
        syntax("unknown element '" + two + "'");
      }
    } else if (c == '*') {
      unsupported("wildcard atom '*'");
    } else {
      syntax("expected element symbol in bracket atom");
    }

    if (peek(0) == '@') unsupported("chirality '@'");

    int hydrogens = 0;
    if (peek(0) == 'H') {
      ++pos_;
      hydrogens = 1;
      if (std::isdigit(static_cast<unsigned char>(peek(0)))) hydrogens = text_[pos_++] - '0';
    }
    atom.explicit_hydrogens = hydrogens;

    if (peek(0) == '+' || peek(0) == '-') {
      const char sign = text_[pos_++];
      int magnitude = 1;
      if (std::isdigit(static_cast<unsigned char>(peek(0)))) {
        magnitude = text_[pos_++] - '0';
      } else {
        while (peek(0) == sign) {
          ++magnitude;
          ++pos_;
        }
      }
      atom.charge = sign == '+' ? magnitude : -magnitude;
    }
    if (peek(0) == ':') unsupported("atom class");
    if (peek(0) != ']') syntax("expected ']' to close bracket atom");
    ++pos_;
    atoms_.push_back(std::move(atom));
    return atoms_.size() - 1;
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::map<int, OpenRing> open_rings_;
};

}  // namespace detail

// Parses the supported SMILES subset: organic-subset and bracket atoms with
// charge and H count, branches, ring closures (digits and %nn), bond symbols
// - = # :, and lowercase aromatic atoms. Stereo, isotopes and '.' are rejected.
inline MolecularGraph parse_smiles(std::string_view text) {
  return detail::SmilesParser(text).parse();
}

}  // namespace lohi
