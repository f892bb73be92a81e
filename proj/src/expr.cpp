#include "hh3/expr.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "hh3/einsum.hpp"
#include "hh3/errors.hpp"

namespace hh3 {

namespace {

constexpr long kStepLimit = 200000;

std::vector<std::string>& name_table() {
  static std::vector<std::string> names;
  return names;
}

std::mutex& name_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Index free_index(std::string_view name) {
  std::lock_guard<std::mutex> lock(name_mutex());
  auto& names = name_table();
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Index>(i);
  }
  names.emplace_back(name);
  return static_cast<Index>(names.size() - 1);
}

const std::string& free_index_name(Index id) {
  std::lock_guard<std::mutex> lock(name_mutex());
  auto& names = name_table();
  while (static_cast<size_t>(id) >= names.size()) {
    names.push_back("i" + std::to_string(names.size()));
  }
  return names[static_cast<size_t>(id)];
}

ScalarAtom ScalarAtom::der_mat(int slot, Index i, Index j) {
  if (slot < 1 || slot > 3) throw Error("derivation slot must be 1..3");
  return {AtomKind::DerMat, static_cast<uint8_t>(slot), i, j};
}

bool Term::has_letters() const {
  for (const auto& w : factors)
    if (!w.empty()) return true;
  return false;
}

int Term::letter_count() const {
  int n = 0;
  for (const auto& w : factors) n += static_cast<int>(w.size());
  return n;
}

int Term::u_count() const {
  int n = 0;
  for (const auto& w : factors)
    for (const auto& l : w) n += (l.kind == LetterKind::U) ? 1 : 0;
  return n;
}

namespace {

template <class F>
void for_each_slot(Term& t, F&& fn) {
  for (auto& a : t.scalars) {
    fn(a.row);
    fn(a.col);
  }
  for (auto& w : t.factors)
    for (auto& l : w) {
      fn(l.row);
      fn(l.col);
    }
}

template <class F>
void for_each_slot(const Term& t, F&& fn) {
  for_each_slot(const_cast<Term&>(t), [&](Index& i) { fn(static_cast<Index>(i)); });
}

Index fresh_dummy_base(const Term& t) {
  Index lowest = 0;
  for_each_slot(t, [&](Index i) {
    if (is_dummy(i) && i < lowest) lowest = i;
  });
  return lowest - 1;
}

void substitute_index(Term& t, Index from, Index to) {
  for_each_slot(t, [&](Index& i) {
    if (i == from) i = to;
  });
}

int count_occurrences(const Term& t, Index idx) {
  int n = 0;
  for_each_slot(t, [&](Index i) {
    if (i == idx) ++n;
  });
  return n;
}

}  // namespace

Index fresh_dummy(const Term& t) {
  return fresh_dummy_base(t);
}

void validate_term(const Term& t) {
  if (t.factors.empty()) throw StructureError("term must have at least one tensor factor");
  std::map<Index, int> counts;
  for_each_slot(t, [&](Index i) {
    if (is_dummy(i)) ++counts[i];
  });
  for (const auto& [idx, n] : counts) {
    if (n != 2) {
      throw StructureError("summation index occurs " + std::to_string(n) +
                           " times (must be exactly 2)");
    }
  }
}

void RuleSet::validate() const {
  if (eps && *eps != 1 && *eps != -1) throw Error("eps binding must be +1 or -1");
  if (sym && !subst && !eps) {
    throw Error("SYM requires SUBST or an explicit eps binding");
  }
}

// ---------------------------------------------------------------------------
// Rewrite rules. Each maps one term to one term and strictly decreases the
// measure (u-letters, letters, scalar atoms, misoriented forms).
// ---------------------------------------------------------------------------

namespace {

// R1: delta with a summed slot. A closed loop delta_kk contributes a factor N.
bool apply_delta_elim(Term& t) {
  for (size_t i = 0; i < t.scalars.size(); ++i) {
    const ScalarAtom a = t.scalars[i];
    if (a.kind != AtomKind::Delta) continue;
    if (is_dummy(a.row) && a.row == a.col) {
      t.scalars.erase(t.scalars.begin() + static_cast<long>(i));
      t.coeff.mul_n();
      return true;
    }
    if (is_dummy(a.row) || is_dummy(a.col)) {
      const Index from = is_dummy(a.row) ? a.row : a.col;
      const Index to = is_dummy(a.row) ? a.col : a.row;
      t.scalars.erase(t.scalars.begin() + static_cast<long>(i));
      substitute_index(t, from, to);
      return true;
    }
  }
  return false;
}

// R3: E and E^-1 chained through a summed index contract to a delta. With the
// symmetry rule on, an atom may first be reoriented at the cost of one eps.
bool apply_form_contract(Term& t, bool sym) {
  for (size_t i = 0; i < t.scalars.size(); ++i) {
    for (size_t j = i + 1; j < t.scalars.size(); ++j) {
      const ScalarAtom a = t.scalars[i];
      const ScalarAtom b = t.scalars[j];
      const bool complementary = (a.kind == AtomKind::FormE && b.kind == AtomKind::FormEInv) ||
                                 (a.kind == AtomKind::FormEInv && b.kind == AtomKind::FormE);
      if (!complementary) continue;
      ScalarAtom repl;
      bool eps_flip = false;
      if (is_dummy(a.col) && a.col == b.row) {
        repl = ScalarAtom::delta(a.row, b.col);
      } else if (is_dummy(b.col) && b.col == a.row) {
        repl = ScalarAtom::delta(b.row, a.col);
      } else if (sym && is_dummy(a.row) && a.row == b.row) {
        repl = ScalarAtom::delta(a.col, b.col);
        eps_flip = true;
      } else if (sym && is_dummy(a.col) && a.col == b.col) {
        repl = ScalarAtom::delta(a.row, b.row);
        eps_flip = true;
      } else {
        continue;
      }
      t.scalars.erase(t.scalars.begin() + static_cast<long>(j));
      t.scalars.erase(t.scalars.begin() + static_cast<long>(i));
      t.scalars.push_back(repl);
      if (eps_flip) t.coeff.mul_eps();
      return true;
    }
  }
  return false;
}

// R6: E_{ir} v_{ij} v_{rs} with i, r summed collapses to E_{js}.
bool apply_colinearity(Term& t) {
  for (size_t si = 0; si < t.scalars.size(); ++si) {
    const ScalarAtom s = t.scalars[si];
    if (s.kind != AtomKind::FormE) continue;
    if (!is_dummy(s.row) || !is_dummy(s.col) || s.row == s.col) continue;
    for (auto& w : t.factors) {
      for (size_t p = 0; p + 1 < w.size(); ++p) {
        if (w[p].kind != LetterKind::V || w[p + 1].kind != LetterKind::V) continue;
        if (w[p].row != s.row || w[p + 1].row != s.col) continue;
        const Index jj = w[p].col;
        const Index ss = w[p + 1].col;
        w.erase(w.begin() + static_cast<long>(p), w.begin() + static_cast<long>(p) + 2);
        t.scalars[si] = ScalarAtom::form_e(jj, ss);
        return true;
      }
    }
  }
  return false;
}

// R2: adjacent u_ik v_kj or v_ik u_kj with summed k contracts to delta_ij.
bool apply_antipode(Term& t) {
  for (auto& w : t.factors) {
    for (size_t p = 0; p + 1 < w.size(); ++p) {
      const Letter a = w[p];
      const Letter b = w[p + 1];
      if (a.kind == b.kind) continue;
      if (!is_dummy(a.col) || a.col != b.row) continue;
      const Index i = a.row;
      const Index j = b.col;
      w.erase(w.begin() + static_cast<long>(p), w.begin() + static_cast<long>(p) + 2);
      t.scalars.push_back(ScalarAtom::delta(i, j));
      return true;
    }
  }
  return false;
}

// R4: u_ab -> sum_{kl} (E^-1)_{ak} v_{lk} E_{lb}.
bool apply_selfdual_subst(Term& t, Index& next_dummy) {
  for (auto& w : t.factors) {
    for (auto& l : w) {
      if (l.kind != LetterKind::U) continue;
      const Index a = l.row;
      const Index b = l.col;
      const Index k = next_dummy--;
      const Index lidx = next_dummy--;
      l = Letter::v(lidx, k);
      t.scalars.push_back(ScalarAtom::form_e_inv(a, k));
      t.scalars.push_back(ScalarAtom::form_e(lidx, b));
      return true;
    }
  }
  return false;
}

// Returns false when the term vanished.
bool rewrite_term(Term& t, const RuleSet& rules, long& steps) {
  Index next_dummy = fresh_dummy_base(t);
  for (;;) {
    if (t.coeff.is_zero()) return false;
    if (++steps > kStepLimit) throw Error("rewrite step limit exceeded");
    if (apply_delta_elim(t)) continue;
    if (apply_form_contract(t, rules.sym)) continue;
    if (rules.colin && apply_colinearity(t)) continue;
    if (apply_antipode(t)) continue;
    if (rules.subst && apply_selfdual_subst(t, next_dummy)) continue;
    break;
  }
  return !t.coeff.is_zero();
}

// ---------------------------------------------------------------------------
// Canonical form: dummies renamed by first occurrence scanning scalars then
// factors. The scalar multiset order (within blocks that look alike before
// renaming) and, under SYM, the orientation of each E/E^-1 atom are chosen to
// minimise the serialized key, so alpha-equivalent terms land on the same
// representative.
// ---------------------------------------------------------------------------

using Key = std::vector<int64_t>;

void push_index(Key& key, Index idx, std::map<Index, Index>& ren, Index& next) {
  if (!is_dummy(idx)) {
    key.push_back(0);
    key.push_back(idx);
    return;
  }
  auto it = ren.find(idx);
  if (it == ren.end()) it = ren.emplace(idx, next--).first;
  key.push_back(1);
  key.push_back(-it->second);
}

bool atom_flippable(const ScalarAtom& a, bool sym) {
  return sym && (a.kind == AtomKind::FormE || a.kind == AtomKind::FormEInv);
}

// One atom's contribution to the serialized key, extending the renaming.
Key atom_chunk(const ScalarAtom& a, std::map<Index, Index>& ren, Index& next) {
  Key k;
  k.push_back(static_cast<int64_t>(a.kind));
  k.push_back(a.slot);
  push_index(k, a.row, ren, next);
  push_index(k, a.col, ren, next);
  return k;
}

struct CanonState {
  std::vector<ScalarAtom> placed;  // oriented atoms in chosen order
  std::vector<bool> used;
  std::map<Index, Index> renaming;
  int parity = 0;  // eps flips mod 2
};

// Dedupe signature: two states with the same shared key prefix and the same
// signature generate identical sets of key completions, so only one needs to
// survive. Unseen dummies are numbered by signature scan order, which makes
// the signature independent of the original dummy ids.
Key state_signature(const CanonState& s, const Term& t) {
  Key sig;
  sig.push_back(s.parity);
  std::map<Index, int64_t> fresh;
  auto enc = [&](Index idx) {
    if (!is_dummy(idx)) {
      sig.push_back(0);
      sig.push_back(idx);
      return;
    }
    auto it = s.renaming.find(idx);
    if (it != s.renaming.end()) {
      sig.push_back(1);
      sig.push_back(-it->second);
      return;
    }
    auto f = fresh.find(idx);
    if (f == fresh.end()) f = fresh.emplace(idx, static_cast<int64_t>(fresh.size())).first;
    sig.push_back(2);
    sig.push_back(f->second);
  };
  for (size_t a = 0; a < t.scalars.size(); ++a) {
    if (s.used[a]) continue;
    sig.push_back(static_cast<int64_t>(t.scalars[a].kind));
    sig.push_back(t.scalars[a].slot);
    enc(t.scalars[a].row);
    enc(t.scalars[a].col);
  }
  for (const auto& w : t.factors) {
    sig.push_back(-1);
    for (const auto& l : w) {
      sig.push_back(static_cast<int64_t>(l.kind));
      enc(l.row);
      enc(l.col);
    }
  }
  return sig;
}

constexpr size_t kMaxLiveStates = 4096;

// Canonical form by lexicographic prefix minimization: atoms are placed one
// position at a time, keeping exactly the choices (atom, orientation) that
// minimize the serialized key so far. Ties branch; structurally equivalent
// branches are merged through the signature. Exact and alpha-invariant, and
// the live-state set stays tiny because ties require exact structural
// coincidences.
Key canonicalize_term(Term& t, bool sym) {
  // delta is symmetric outright: orient surviving free-free deltas by index
  // id (deltas touching a summation index were already eliminated).
  for (auto& a : t.scalars) {
    if (a.kind == AtomKind::Delta && !is_dummy(a.row) && !is_dummy(a.col) && a.col < a.row) {
      std::swap(a.row, a.col);
    }
  }

  const size_t n = t.scalars.size();
  std::vector<CanonState> states(1);
  states[0].used.assign(n, false);
  Key prefix;
  prefix.push_back(static_cast<int64_t>(n));

  for (size_t pos = 0; pos < n; ++pos) {
    struct Cand {
      Key chunk;
      size_t parent;
      size_t atom;
      bool flipped;
    };
    std::vector<Cand> cands;
    Key winner;
    bool have_winner = false;
    for (size_t s = 0; s < states.size(); ++s) {
      for (size_t a = 0; a < n; ++a) {
        if (states[s].used[a]) continue;
        const int orientations = atom_flippable(t.scalars[a], sym) ? 2 : 1;
        for (int flip = 0; flip < orientations; ++flip) {
          ScalarAtom atom = t.scalars[a];
          if (flip) std::swap(atom.row, atom.col);
          std::map<Index, Index> ren = states[s].renaming;
          Index next = -1 - static_cast<Index>(ren.size());
          Cand c{atom_chunk(atom, ren, next), s, a, flip == 1};
          if (!have_winner || c.chunk < winner) {
            winner = c.chunk;
            have_winner = true;
            cands.push_back(std::move(c));
          } else if (c.chunk == winner) {
            cands.push_back(std::move(c));
          }
        }
      }
    }
    // Entries pushed before the minimum tightened are filtered below.
    std::map<Key, size_t> seen;
    std::vector<CanonState> next_states;
    for (const Cand& c : cands) {
      if (c.chunk != winner) continue;
      CanonState ns = states[c.parent];
      ScalarAtom atom = t.scalars[c.atom];
      if (c.flipped) std::swap(atom.row, atom.col);
      Index next = -1 - static_cast<Index>(ns.renaming.size());
      (void)atom_chunk(atom, ns.renaming, next);  // extend the renaming for real
      ns.placed.push_back(atom);
      ns.used[c.atom] = true;
      ns.parity ^= c.flipped ? 1 : 0;
      Key sig = state_signature(ns, t);
      if (seen.emplace(std::move(sig), next_states.size()).second) {
        next_states.push_back(std::move(ns));
        if (next_states.size() > kMaxLiveStates) {
          throw Error("canonical form search space too large");
        }
      }
    }
    prefix.insert(prefix.end(), winner.begin(), winner.end());
    states = std::move(next_states);
  }

  // Append the factor serialization per surviving state and pick the minimum.
  std::optional<Key> best_key;
  std::optional<CanonState> best_state;
  bool best_even = false;
  bool best_odd = false;
  for (CanonState& s : states) {
    Key key = prefix;
    Index next = -1 - static_cast<Index>(s.renaming.size());
    key.push_back(static_cast<int64_t>(t.factors.size()));
    for (const auto& w : t.factors) {
      key.push_back(static_cast<int64_t>(w.size()));
      for (const auto& l : w) {
        key.push_back(static_cast<int64_t>(l.kind));
        push_index(key, l.row, s.renaming, next);
        push_index(key, l.col, s.renaming, next);
      }
    }
    if (!best_key || key < *best_key) {
      best_key = std::move(key);
      best_even = s.parity == 0;
      best_odd = s.parity == 1;
      best_state = s;
    } else if (key == *best_key) {
      best_even = best_even || s.parity == 0;
      best_odd = best_odd || s.parity == 1;
      if (s.parity < best_state->parity) best_state = s;
    }
  }

  t.scalars = best_state->placed;
  for (auto& w : t.factors) {
    for (auto& l : w) {
      if (is_dummy(l.row)) l.row = best_state->renaming.at(l.row);
      if (is_dummy(l.col)) l.col = best_state->renaming.at(l.col);
    }
  }
  for (auto& a : t.scalars) {
    if (is_dummy(a.row)) a.row = best_state->renaming.at(a.row);
    if (is_dummy(a.col)) a.col = best_state->renaming.at(a.col);
  }
  if (best_even && best_odd) {
    // The minimal form is fixed by an odd flip combination, so the term
    // equals eps times itself: project the coefficient onto its
    // eps-symmetric part, (c + c*eps)/2, the canonical representative.
    Coefficient flipped = t.coeff;
    flipped.mul_eps();
    t.coeff += flipped;
    t.coeff *= Coefficient::of(Rational(1, 2));
  } else if (best_state->parity % 2 == 1) {
    t.coeff.mul_eps();
  }
  return *best_key;
}

}  // namespace

std::vector<Term> normalize_terms(const std::vector<Term>& terms, const RuleSet& rules,
                                  NormalizeStats* stats) {
  rules.validate();
  long steps = 0;
  std::map<Key, Term> merged;
  size_t degree_witness = 0;
  bool have_degree = false;
  for (const Term& input : terms) {
    if (!have_degree) {
      degree_witness = input.factors.size();
      have_degree = true;
    } else if (input.factors.size() != degree_witness) {
      throw StructureError("terms of mixed degree in one expression");
    }
    validate_term(input);
    Term t = input;
    if (!rewrite_term(t, rules, steps)) continue;
    Key key = canonicalize_term(t, rules.sym);
    if (rules.eps) t.coeff = t.coeff.substitute_eps(*rules.eps);
    if (t.coeff.is_zero()) continue;
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(std::move(key), std::move(t));
    } else {
      it->second.coeff += t.coeff;
    }
  }
  std::vector<Term> out;
  for (auto& [key, t] : merged) {
    if (!t.coeff.is_zero()) out.push_back(std::move(t));
  }
  if (stats) stats->rule_steps += steps;
  return out;
}

IndexedExpr IndexedExpr::unit() {
  return from_term(Term::unit());
}

IndexedExpr IndexedExpr::from_term(Term t) {
  if (t.factors.size() != 1) throw StructureError("IndexedExpr term must have a single factor");
  IndexedExpr e;
  e.terms_.push_back(std::move(t));
  return e;
}

IndexedExpr IndexedExpr::from_terms(std::vector<Term> ts) {
  IndexedExpr e;
  for (auto& t : ts) {
    if (t.factors.size() != 1) throw StructureError("IndexedExpr term must have a single factor");
  }
  e.terms_ = std::move(ts);
  return e;
}

IndexedExpr IndexedExpr::letter(Letter l) {
  Term t;
  t.factors = {Word{l}};
  return from_term(std::move(t));
}

IndexedExpr& IndexedExpr::operator+=(const IndexedExpr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

IndexedExpr& IndexedExpr::operator-=(const IndexedExpr& o) {
  for (const Term& t : o.terms_) {
    Term neg = t;
    neg.coeff = -neg.coeff;
    terms_.push_back(std::move(neg));
  }
  return *this;
}

IndexedExpr& IndexedExpr::scale(const Coefficient& c) {
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

IndexedExpr normalize(const IndexedExpr& x, const RuleSet& rules, NormalizeStats* stats) {
  return IndexedExpr::from_terms(normalize_terms(x.terms(), rules, stats));
}

namespace {

Term shift_dummies(Term t, Index offset) {
  if (offset == 0) return t;
  for_each_slot(t, [&](Index& i) {
    if (is_dummy(i)) i += offset;
  });
  return t;
}

}  // namespace

IndexedExpr multiply(const IndexedExpr& x, const IndexedExpr& y) {
  std::vector<Term> out;
  for (const Term& tx : x.terms()) {
    const Index base = fresh_dummy_base(tx) + 1;  // all of tx's dummies are > base - 1
    for (const Term& ty : y.terms()) {
      Term rhs = shift_dummies(ty, base);
      Term t;
      t.coeff = tx.coeff * rhs.coeff;
      t.scalars = tx.scalars;
      t.scalars.insert(t.scalars.end(), rhs.scalars.begin(), rhs.scalars.end());
      Word w = tx.factors[0];
      w.insert(w.end(), rhs.factors[0].begin(), rhs.factors[0].end());
      t.factors = {std::move(w)};
      out.push_back(std::move(t));
    }
  }
  return IndexedExpr::from_terms(normalize_terms(out, RuleSet::contract()));
}

IndexedExpr counit(const IndexedExpr& x) {
  std::vector<Term> out;
  for (const Term& t : x.terms()) {
    Term s;
    s.coeff = t.coeff;
    s.scalars = t.scalars;
    for (const Letter& l : t.factors[0]) {
      s.scalars.push_back(ScalarAtom::delta(l.row, l.col));
    }
    out.push_back(std::move(s));
  }
  return IndexedExpr::from_terms(normalize_terms(out, RuleSet::contract()));
}

Term sum_over(Term t, Index free_id) {
  if (is_dummy(free_id)) throw StructureError("sum_over expects a free index");
  const int n = count_occurrences(t, free_id);
  if (n != 2) {
    throw StructureError("cannot sum over index '" + free_index_name(free_id) + "': occurs " +
                         std::to_string(n) + " times");
  }
  const Index d = fresh_dummy_base(t);
  substitute_index(t, free_id, d);
  return t;
}

IndexedExpr sum_over(const IndexedExpr& x, Index free_id) {
  std::vector<Term> out;
  for (const Term& t : x.terms()) out.push_back(sum_over(t, free_id));
  return IndexedExpr::from_terms(std::move(out));
}

IndexedExpr specialize_form_to_identity(const IndexedExpr& x) {
  std::vector<Term> out;
  for (Term t : x.terms()) {
    for (auto& a : t.scalars) {
      if (a.kind == AtomKind::FormE || a.kind == AtomKind::FormEInv) {
        a.kind = AtomKind::Delta;
      }
    }
    out.push_back(std::move(t));
  }
  return IndexedExpr::from_terms(normalize_terms(out, RuleSet::contract()));
}

bool equal_normalized(const IndexedExpr& x, const IndexedExpr& y, const RuleSet& rules) {
  IndexedExpr diff = x;
  diff -= y;
  return normalize(diff, rules).is_zero();
}

// ---------------------------------------------------------------------------
// Rendering. Deterministic textual grammar:
//   term := ['sum{k0,..} '] coeff [' * ' atoms] [' * ' factor (' | ' factor)*]
// with atoms space-separated, letters v[i,j]/u[i,j], unit factor '1'.
// ---------------------------------------------------------------------------

namespace {

std::string index_display(Index idx, std::map<Index, int>& dummy_names, int& next_name) {
  if (!is_dummy(idx)) return free_index_name(idx);
  auto it = dummy_names.find(idx);
  if (it == dummy_names.end()) it = dummy_names.emplace(idx, next_name++).first;
  return "k" + std::to_string(it->second);
}

std::string atom_display(const ScalarAtom& a, std::map<Index, int>& names, int& next) {
  std::string head;
  switch (a.kind) {
    case AtomKind::Delta: head = "delta"; break;
    case AtomKind::FormE: head = "E"; break;
    case AtomKind::FormEInv: head = "Einv"; break;
    case AtomKind::DerMat: head = "F" + std::to_string(a.slot); break;
  }
  return head + "[" + index_display(a.row, names, next) + "," + index_display(a.col, names, next) +
         "]";
}

}  // namespace

std::string render(const Term& t) {
  std::map<Index, int> names;
  int next = 0;
  // Assign dummy display names in scan order first so sum{...} lists them in
  // order of appearance.
  std::vector<std::string> atom_strs;
  for (const auto& a : t.scalars) atom_strs.push_back(atom_display(a, names, next));
  std::vector<std::string> factor_strs;
  for (const auto& w : t.factors) {
    if (w.empty()) {
      factor_strs.emplace_back("1");
      continue;
    }
    std::string f;
    for (const auto& l : w) {
      if (!f.empty()) f += " ";
      f += (l.kind == LetterKind::V ? "v[" : "u[") + index_display(l.row, names, next) + "," +
           index_display(l.col, names, next) + "]";
    }
    factor_strs.push_back(std::move(f));
  }

  std::string out;
  if (!names.empty()) {
    std::vector<std::pair<int, Index>> in_order;
    for (const auto& [idx, name] : names) in_order.push_back({name, idx});
    std::sort(in_order.begin(), in_order.end());
    out += "sum{";
    for (size_t i = 0; i < in_order.size(); ++i) {
      if (i) out += ",";
      out += "k" + std::to_string(in_order[i].first);
    }
    out += "} ";
  }
  out += t.coeff.str();
  if (!atom_strs.empty()) {
    out += " *";
    for (const auto& s : atom_strs) out += " " + s;
  }
  const bool factor_trivial = t.degree() == 0 && t.factors[0].empty();
  if (!factor_trivial) {
    out += " * ";
    for (size_t i = 0; i < factor_strs.size(); ++i) {
      if (i) out += " | ";
      out += factor_strs[i];
    }
  }
  return out;
}

std::string render(const std::vector<Term>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    std::string piece = render(terms[i]);
    if (i == 0) {
      out = piece;
    } else if (!piece.empty() && piece[0] == '-') {
      out += " - " + piece.substr(1);
    } else {
      out += " + " + piece;
    }
  }
  return out;
}

std::string render(const IndexedExpr& x) {
  return render(x.terms());
}

// ---------------------------------------------------------------------------
// Exact grounding of scalar networks.
// ---------------------------------------------------------------------------

namespace {

const QMatrix& resolve_atom(const ScalarAtom& a, const ScalarBindings& b, const QMatrix& identity,
                            const QMatrix& e_inv_cached) {
  switch (a.kind) {
    case AtomKind::Delta:
      return identity;
    case AtomKind::FormE:
      if (!b.form_e) throw EvalError("no binding for E");
      return *b.form_e;
    case AtomKind::FormEInv:
      return e_inv_cached;
    case AtomKind::DerMat: {
      const auto& f = b.der[a.slot - 1];
      if (!f) throw EvalError("no binding for F" + std::to_string(a.slot));
      return *f;
    }
  }
  throw EvalError("unknown atom kind");
}

}  // namespace

Rational evaluate_scalar_network(const IndexedExpr& x, const ScalarBindings& bindings, int n,
                                 const IndexAssignment& assignment) {
  if (n <= 0) throw EvalError("dimension must be positive");
  const QMatrix identity = QMatrix::identity(n);
  QMatrix e_inv;
  if (bindings.form_e_inv) {
    e_inv = *bindings.form_e_inv;
    if (bindings.form_e) {
      if (bindings.form_e->rows() != n || e_inv.rows() != n)
        throw EvalError("dimension mismatch for E binding");
      if (!(*bindings.form_e * e_inv == identity))
        throw EvalError("E^-1 binding is not the exact inverse of E");
    }
  } else if (bindings.form_e) {
    e_inv = inverse(*bindings.form_e);
  }

  auto pin_of = [&](Index idx) -> std::optional<int> {
    if (is_dummy(idx)) return std::nullopt;
    auto it = assignment.find(idx);
    if (it == assignment.end()) {
      throw EvalError("free index present: '" + free_index_name(idx) + "'");
    }
    if (it->second < 0 || it->second >= n) throw EvalError("index assignment out of range");
    return it->second;
  };

  Rational total;
  for (const Term& t : x.terms()) {
    validate_term(t);
    if (t.has_letters()) throw EvalError("expression is not a scalar network (contains letters)");
    Rational acc = t.coeff.eval(n, bindings.eps);
    std::vector<EinsumTensor<Rational>> ts;
    for (const auto& a : t.scalars) {
      const QMatrix& m = resolve_atom(a, bindings, identity, e_inv);
      if (m.rows() != n || m.cols() != n) throw EvalError("dimension mismatch in atom binding");
      ts.push_back({m, a.row, a.col, pin_of(a.row), pin_of(a.col)});
    }
    total += contract_network(std::move(ts), acc);
  }
  return total;
}

}  // namespace hh3
