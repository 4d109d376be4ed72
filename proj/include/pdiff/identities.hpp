#pragma once
// Machine checks of the shuffle-algebra identities: each formal rule is compared
// with the rational model, or with a closed form evaluated there.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pdiff/concrete.hpp"
#include "pdiff/linalg.hpp"
#include "pdiff/polydiff.hpp"

namespace pdiff {

struct Check {
  std::string name;
  bool pass = true;
  long cases = 0;
  std::string detail;  // first failure, if any

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

inline Seq pool_seq(int color, std::initializer_list<int> ords) {
  Seq s;
  for (int o : ords) s.push_back(ColoredIndex{color, o});
  return s;
}

inline std::vector<ColoredIndex> index_range(int color, int from, int count) {
  std::vector<ColoredIndex> out;
  for (int o = from; o < from + count; ++o) out.push_back(ColoredIndex{color, o});
  return out;
}

// Repetition-free sequences over `pool` with length in [lo, hi].
inline std::vector<Seq> all_sequences(const std::vector<ColoredIndex>& pool, int lo, int hi) {
  std::vector<Seq> out;
  Seq cur;
  std::vector<bool> used(pool.size(), false);
  std::function<void()> rec = [&]() {
    if (int(cur.size()) >= lo) out.push_back(cur);
    if (int(cur.size()) == hi) return;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.push_back(pool[j]);
      rec();
      cur.pop_back();
      used[j] = false;
    }
  };
  rec();
  return out;
}

// Two-slot keys with total length <= hi.
inline std::vector<MultiSeq> all_two_slot_keys(const std::vector<ColoredIndex>& pool, int hi) {
  std::vector<MultiSeq> out;
  for (const auto& s : all_sequences(pool, 0, hi)) {
    for (std::size_t cut = 0; cut <= s.size(); ++cut)
      out.push_back(MultiSeq{Seq(s.begin(), s.begin() + long(cut)), Seq(s.begin() + long(cut), s.end())});
  }
  return out;
}

// Parameters given by lookup tables with deterministic random defaults.
struct TableParams {
  std::map<std::pair<ColoredIndex, int>, Q> p;
  std::map<std::pair<ColoredIndex, ColoredIndex>, Q> c;
  std::uint64_t seed = 1;

  static Q hashed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = seed * 0x9E3779B97F4A7C15ULL ^ (a + 0x632BE59BD9B4E019ULL) * 0xBF58476D1CE4E5B9ULL ^
                      (b + 0x94D049BB133111EBULL) * 0x94D049BB133111EBULL;
    h ^= h >> 31;
    return make_q(long(h % 23) - 11, long(h / 23 % 5) + 1);
  }
  static std::uint64_t code(const ColoredIndex& x) { return std::uint64_t(x.color) * 1000 + std::uint64_t(x.ordinal); }

  PhiParams<Q> params() const {
    PhiParams<Q> prm;
    auto self = *this;
    prm.p = [self](const ColoredIndex& x, int s) {
      auto it = self.p.find({x, s});
      return it != self.p.end() ? it->second : hashed(self.seed, code(x), std::uint64_t(1000000 + s));
    };
    prm.c = [self](const ColoredIndex& x, const ColoredIndex& y) {
      auto it = self.c.find({x, y});
      return it != self.c.end() ? it->second : hashed(self.seed + 7, code(x), code(y));
    };
    return prm;
  }
};

// ---------------------------------------------------------------------------
// Bialgebra laws on basis elements.

inline Check check_bialgebra(int pool_size = 6, int max_total = 4) {
  Check ch{"shuffle bialgebra laws"};
  auto pool = index_range(0, 1, pool_size);
  auto seqs = all_sequences(pool, 0, max_total);
  using PD = PolyDiff<Q>;
  std::vector<PD> el;
  for (const auto& s : seqs) el.push_back(PD::zeta1(s));
  auto unit = PD::unit();
  for (std::size_t a = 0; a < seqs.size(); ++a) {
    if (!(shuffle_product(unit, el[a]) == el[a])) ch.fail("unit law at " + to_string(seqs[a]));
    ++ch.cases;
    for (std::size_t b = 0; b < seqs.size(); ++b) {
      std::size_t lab = seqs[a].size() + seqs[b].size();
      if (int(lab) > max_total) continue;
      PD ab = shuffle_product(el[a], el[b]);
      ++ch.cases;
      if (!(ab == shuffle_product(el[b], el[a]))) ch.fail("commutativity at " + to_string(seqs[a]) + to_string(seqs[b]));
      if (!(coproduct(ab) == tensor_product(coproduct(el[a]), coproduct(el[b]))))
        ch.fail("coproduct multiplicativity at " + to_string(seqs[a]) + to_string(seqs[b]));
      if (seqs[a].empty() || seqs[b].empty()) continue;
      for (std::size_t c = 0; c < seqs.size(); ++c) {
        if (seqs[c].empty() || int(lab + seqs[c].size()) > max_total) continue;
        ++ch.cases;
        if (!(shuffle_product(ab, el[c]) == shuffle_product(el[a], shuffle_product(el[b], el[c]))))
          ch.fail("associativity at " + to_string(seqs[a]) + to_string(seqs[b]) + to_string(seqs[c]));
      }
    }
  }
  return ch;
}

// The shuffle product agrees with the pointwise product of realizations.
inline Check check_product_realization(int pool_size = 5, int max_total = 4) {
  Check ch{"shuffle product vs rational model"};
  auto pool = index_range(0, 1, pool_size);
  auto seqs = all_sequences(pool, 1, max_total - 1);
  for (const auto& a : seqs)
    for (const auto& b : seqs) {
      if (int(a.size() + b.size()) > max_total) continue;
      if (!disjoint(support_of(a), support_of(b))) continue;
      ++ch.cases;
      auto lhs = realize(shuffle_product(PolyDiff<Q>::zeta1(a), PolyDiff<Q>::zeta1(b)));
      auto rhs = realize(PolyDiff<Q>::zeta1(a)) * realize(PolyDiff<Q>::zeta1(b));
      if (!identity_test(lhs, rhs).equal) ch.fail("product " + to_string(a) + " * " + to_string(b));
    }
  return ch;
}

// ---------------------------------------------------------------------------
// Residue rules against the rational model.

inline Check check_residue_rules(int pool_size = 4, int max_len = 4) {
  Check ch{"residue rules vs rational model"};
  auto pool = index_range(0, 1, pool_size);
  std::vector<MultiSeq> keys;
  for (const auto& s : all_sequences(pool, 0, max_len)) keys.push_back(MultiSeq{s});
  for (const auto& k : all_two_slot_keys(pool, std::min(max_len, 3))) keys.push_back(k);
  for (const auto& key : keys) {
    const PolyDiff<Q> a = PolyDiff<Q>::zeta(key);
    const ConcretePolyDiff ca = realize(a);
    for (const auto& x : pool) {
      ++ch.cases;
      if (!identity_test(realize(residue_at_infinity(x, a)), concrete_E(ca, x)).equal)
        ch.fail("E at " + to_string(x) + " on " + to_string(key));
      for (int s = 0; s < a.n(); ++s)
        if (!identity_test(realize(residue_at_marked(x, s, a)), concrete_Eprime(ca, x, s)).equal)
          ch.fail("E' at " + to_string(x) + " slot " + std::to_string(s) + " on " + to_string(key));
      for (const auto& y : pool) {
        if (x == y) continue;
        ++ch.cases;
        if (!identity_test(realize(residue_diag(x, y, a)), concrete_res_diag(ca, x, y)).equal)
          ch.fail("res " + to_string(x) + "->" + to_string(y) + " on " + to_string(key));
      }
    }
  }
  return ch;
}

// Phi_x formal vs multiplication by the one-form in the rational model.
inline Check check_phi_realization(int pool_size = 4, int max_len = 3) {
  Check ch{"Phi operators vs rational model"};
  auto pool = index_range(0, 1, pool_size);
  TableParams tp;
  auto prm = tp.params();
  std::vector<MultiSeq> keys;
  for (const auto& s : all_sequences(pool, 0, max_len)) keys.push_back(MultiSeq{s});
  for (const auto& k : all_two_slot_keys(pool, 2)) keys.push_back(k);
  for (const auto& key : keys) {
    auto a = PolyDiff<Q>::zeta(key);
    for (const auto& x : pool) {
      ++ch.cases;
      if (!identity_test(realize(phi(x, prm, a)), concrete_phi(x, prm, a.n(), realize(a))).equal)
        ch.fail("Phi_" + to_string(x) + " on " + to_string(key));
    }
  }
  return ch;
}

template <class Op>
PolyDiff<Q> nested_bracket(const std::vector<Op>& ops, const PolyDiff<Q>& a) {
  // [[[ops[0], ops[1]], ops[2]], ...] applied to a.
  std::function<PolyDiff<Q>(std::size_t, const PolyDiff<Q>&)> apply = [&](std::size_t upto,
                                                                         const PolyDiff<Q>& v) -> PolyDiff<Q> {
    if (upto == 0) return ops[0](v);
    return apply(upto - 1, ops[upto](v)) - ops[upto](apply(upto - 1, v));
  };
  return apply(ops.size() - 1, a);
}

// Iterated commutators of E (resp. E') against the iterated residue.
inline Check check_flag_residue(int pool_size = 5, int max_I = 4, int max_key = 5) {
  Check ch{"iterated residue brackets"};
  auto pool = index_range(0, 1, pool_size);
  auto keys = all_sequences(pool, 0, max_key);
  using Op = std::function<PolyDiff<Q>(const PolyDiff<Q>&)>;
  for (const auto& I : all_sequences(pool, 2, max_I)) {
    std::vector<Op> es, eps;
    for (const auto& x : I) {
      es.push_back([x](const PolyDiff<Q>& v) { return residue_at_infinity(x, v); });
      eps.push_back([x](const PolyDiff<Q>& v) { return residue_at_marked(x, 0, v); });
    }
    for (const auto& K : keys) {
      auto a = PolyDiff<Q>::zeta1(K);
      auto r = iterated_residue(I, a);
      ++ch.cases;
      // residue_at_infinity is E = -res_{t=oo}. The E-bracket picks up (-1)^(N-1)
      // relative to E applied to res_I, unlike the E'-bracket.
      auto e_side = residue_at_infinity(I.back(), r);
      if (I.size() % 2 == 0) e_side = -e_side;
      if (!(nested_bracket(es, a) == e_side))
        ch.fail("E-bracket for I=" + to_string(I) + " on " + to_string(K));
      if (!(nested_bracket(eps, a) == residue_at_marked(I.back(), 0, r)))
        ch.fail("E'-bracket for I=" + to_string(I) + " on " + to_string(K));
    }
  }
  return ch;
}

// Formal iterated residue against the rational model.
inline Check check_iterated_residue_realization(int pool_size = 4, int max_len = 4) {
  Check ch{"iterated residues vs rational model"};
  auto pool = index_range(0, 1, pool_size);
  auto keys = all_sequences(pool, 2, max_len);
  for (const auto& I : all_sequences(pool, 2, max_len)) {
    for (const auto& K : keys) {
      if (K.size() < I.size()) continue;
      auto a = PolyDiff<Q>::zeta1(K);
      ++ch.cases;
      auto formal = iterated_residue(I, a);
      auto conc = concrete_iterated_residue(I, realize(a));
      if (!identity_test(realize(formal), conc).equal) ch.fail("res_I for I=" + to_string(I) + " on " + to_string(K));
      // and the flag form at infinity
      auto inf_formal = residue_at_infinity(I.back(), formal);
      auto inf_conc = concrete_E(conc, I.back());
      if (!identity_test(realize(inf_formal), inf_conc).equal)
        ch.fail("-res_oo res_I for I=" + to_string(I) + " on " + to_string(K));
    }
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Linear independence of realizations and the polynomial generator.

inline Check check_intrinsic_independence(int max_len = 4, std::uint64_t seed = 11) {
  Check ch{"linear independence of realizations"};
  Rng rng(seed);
  for (int len = 1; len <= max_len; ++len) {
    auto pool = index_range(0, 1, len);
    auto keys = all_sequences(pool, len, len);  // all orderings of one support
    std::vector<RatFunc> fs;
    for (const auto& k : keys) fs.push_back(realize_seq(k, 0));
    std::size_t rows = keys.size() + 2;
    Matrix m(rows, keys.size());
    for (std::size_t r = 0; r < rows; ++r) {
      std::map<Var, Q> pt;
      for (;;) {
        pt.clear();
        for (const auto& x : pool) pt[var_t(x)] = rng.rational(1000, 1);
        pt[var_z(0)] = rng.rational(1000, 1);
        bool bad = false;
        for (const auto& f : fs) bad = bad || f.denominators_vanish_at(pt);
        if (!bad) break;
      }
      for (std::size_t c = 0; c < keys.size(); ++c) m(r, c) = fs[c].evaluate_full(pt);
    }
    ++ch.cases;
    if (m.rank() != keys.size()) ch.fail("rank deficit for support size " + std::to_string(len));
  }
  return ch;
}

inline Check check_polynomial_generator(int max_N = 4) {
  Check ch{"divided powers of the primitive generator"};
  auto pool = index_range(0, 1, max_N + 1);
  PolyDiff<Q> zeta(1);
  for (const auto& x : pool) zeta += PolyDiff<Q>::zeta1(Seq{x});
  PolyDiff<Q> power = PolyDiff<Q>::unit();
  for (int N = 1; N <= max_N; ++N) {
    power = shuffle_product(power, zeta);
    ConcretePolyDiff rhs;
    for (const auto& X : all_sequences(pool, N, N)) {
      if (!std::is_sorted(X.begin(), X.end())) continue;
      RatFunc f(Q(1));
      for (const auto& x : X) f = f * RatFunc::inverse(t_of(x) - z_of(0));
      rhs.add(support_of(X), f);
    }
    ++ch.cases;
    if (!identity_test(realize(power * (1 / factorial_q(N))), rhs).equal) ch.fail("N=" + std::to_string(N));
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Two-parameter identities: z = z_1 (slot 0), w = z_2 (slot 1).

inline PolyDiff<Q> key2(const Seq& a, const Seq& b) { return PolyDiff<Q>::zeta(MultiSeq{a, b}); }

inline Check check_mixed_shuffle(int max_len = 3, int trials = 20, std::uint64_t seed = 5) {
  Check ch{"mixed shuffle identities"};
  IdentityOptions rnd{trials, seed, 0, true};
  IdentityOptions ex;
  auto ipool = index_range(0, 1, max_len);
  const RatFunc z(z_of(0)), w(z_of(1));
  auto both = [&](const ConcretePolyDiff& l, const ConcretePolyDiff& r) {
    return identity_test(l, r, rnd).equal && identity_test(l, r, ex).equal;
  };
  for (const auto& I : all_sequences(ipool, 1, max_len)) {
    const ConcretePolyDiff zI = realize(key2(I, {}));
    // First identity.
    {
      PolyDiff<Q> rhs(2);
      for (std::size_t cut = 0; cut <= I.size(); ++cut) {
        Seq I2(I.begin(), I.begin() + long(cut)), I1(I.begin() + long(cut), I.end());
        rhs += key2(I1, reversed(I2)) * Q(cut % 2 ? -1 : 1);
      }
      auto lhs = zI.times((z - w) * RatFunc::inverse(t_of(I.front()) - z_of(1)));
      ++ch.cases;
      if (!both(lhs, realize(rhs))) ch.fail("first identity, I=" + to_string(I));
    }
    for (std::size_t pos = 0; pos < I.size(); ++pos) {
      const ColoredIndex i = I[pos];
      Seq Ipp(I.begin(), I.begin() + long(pos)), Ip(I.begin() + long(pos) + 1, I.end());
      Seq Ippi = Ipp;
      Ippi.push_back(i);
      // Second identity.
      PolyDiff<Q> rhs = key2(I, {});
      ConcretePolyDiff rhs3 = zI;
      const ColoredIndex j{1, 99};
      for (std::size_t cut = 0; cut <= Ip.size(); ++cut) {
        Seq I2(Ip.begin(), Ip.begin() + long(cut)), I1(Ip.begin() + long(cut), Ip.end());
        Seq I2si = reversed(I2);
        I2si.push_back(i);
        Q sign(cut % 2 ? -1 : 1);
        rhs -= shuffle_product(key2(I1, {}), omega_times(Ippi, key2({}, I2si))) * sign;
        Seq I2sij = I2si;
        I2sij.push_back(j);
        rhs3 -= (realize(key2(I1, {})) * realize_omega(Ippi) * realize_omega(I2sij)).times(RatFunc(sign));
      }
      auto lhs = zI.times((z - w) * RatFunc::inverse(t_of(i) - z_of(1)));
      ++ch.cases;
      if (!both(lhs, realize(rhs))) ch.fail("second identity, I=" + to_string(I) + " i=" + to_string(i));
      // Third identity.
      auto lhs3 = zI.times((z - RatFunc(t_of(j))) * RatFunc::inverse(t_of(i) - t_of(j)));
      ++ch.cases;
      if (!both(lhs3, rhs3)) ch.fail("third identity, I=" + to_string(I) + " i=" + to_string(i));
    }
  }
  return ch;
}

inline Check check_mixed_shuffle2(int max_len = 3, int trials = 20, std::uint64_t seed = 6) {
  Check ch{"mixed shuffle identity with two marked points"};
  IdentityOptions rnd{trials, seed, 0, true};
  auto ipool = index_range(0, 1, max_len);
  auto jpool = index_range(1, 1, max_len);
  const RatFunc z(z_of(0)), w(z_of(1));
  auto I_all = all_sequences(ipool, 1, max_len);
  auto J_all = all_sequences(jpool, 1, max_len);
  for (const auto& I : I_all) {
    for (const auto& J : J_all) {
      if (I.size() + J.size() > std::size_t(max_len + 1)) continue;  // keeps the sweep within budget
      const ConcretePolyDiff zz = realize(key2(I, J));
      for (std::size_t pi = 0; pi < I.size(); ++pi) {
        for (std::size_t pj = 0; pj < J.size(); ++pj) {
          const ColoredIndex i = I[pi], j = J[pj];
          Seq Ipp(I.begin(), I.begin() + long(pi)), Ip(I.begin() + long(pi) + 1, I.end());
          Seq Jpp(J.begin(), J.begin() + long(pj)), Jp(J.begin() + long(pj) + 1, J.end());
          ConcretePolyDiff rhs = zz;
          for (std::size_t cut = 0; cut <= Ip.size(); ++cut) {
            Seq I2(Ip.begin(), Ip.begin() + long(cut)), I1(Ip.begin() + long(cut), Ip.end());
            Seq a = reversed(I2);
            a.push_back(i);
            Seq b = Ipp;
            b.push_back(i);
            b.push_back(j);
            rhs -= (realize(key2(I1, {})) * realize_omega(a) * realize_omega(b) * realize(key2({}, J)))
                       .times(RatFunc(Q(cut % 2 ? -1 : 1)));
          }
          for (std::size_t cut = 0; cut <= Jp.size(); ++cut) {
            Seq J2(Jp.begin(), Jp.begin() + long(cut)), J1(Jp.begin() + long(cut), Jp.end());
            Seq a = reversed(J2);
            a.push_back(j);
            Seq b = Jpp;
            b.push_back(j);
            b.push_back(i);
            rhs -= (realize_omega(a) * realize_omega(b) * realize(key2(I, {})) * realize(key2({}, J1)))
                       .times(RatFunc(Q(cut % 2 ? -1 : 1)));
          }
          auto lhs = zz.times((z - w) * RatFunc::inverse(t_of(i) - t_of(j)));
          ++ch.cases;
          if (!identity_test(lhs, rhs, rnd).equal)
            ch.fail("I=" + to_string(I) + " J=" + to_string(J) + " i=" + to_string(i) + " j=" + to_string(j));
        }
      }
    }
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Sum-product identity, powers, brackets.

inline Check check_sum_product(int max_N = 5, int trials = 20, std::uint64_t seed = 3) {
  Check ch{"sum-product identity"};
  const Poly a = pvar(var_param("a")), b = pvar(var_param("b"));
  Rng rng(seed);
  for (int N = 1; N <= max_N; ++N) {
    Poly rhs = Poly(factorial_q(N));
    for (int k = 0; k < N; ++k) rhs = rhs * (b + a * make_q(k, 2));
    std::vector<int> perm(static_cast<std::size_t>(N));
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<Q> t(static_cast<std::size_t>(N));
      Q z;
      bool ok = false;
      while (!ok) {
        for (auto& x : t) x = rng.rational(100000, 1);
        z = rng.rational(100000, 1);
        ok = true;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < i; ++j) ok = ok && t[std::size_t(i)] != t[std::size_t(j)];
      }
      for (int i = 0; i < N; ++i) perm[std::size_t(i)] = i;
      Poly lhs;
      do {
        Poly prod(Q(1));
        for (int k = 0; k < N; ++k) {
          Q s(0);
          const Q& tk = t[std::size_t(perm[std::size_t(k)])];
          for (int l = 0; l < k; ++l) s += (tk - z) / (tk - t[std::size_t(perm[std::size_t(l)])]);
          prod = prod * (b + a * s);
        }
        lhs += prod;
      } while (std::next_permutation(perm.begin(), perm.end()));
      ++ch.cases;
      if (!(lhs == rhs)) ch.fail("N=" + std::to_string(N) + ": " + lhs.str() + " vs " + rhs.str());
    }
  }
  return ch;
}

inline Check check_power(int max_m = 4) {
  Check ch{"powers of Phi on a color class"};
  for (int m = 0; m <= max_m; ++m) {
    auto pool = index_range(0, 1, m + 2);
    TableParams tp;
    for (const auto& x : pool) {
      tp.p[{x, 0}] = Q(m);
      for (const auto& y : pool) tp.c[{x, y}] = Q(2);
    }
    auto prm = tp.params();
    PolyDiff<Q> cur = PolyDiff<Q>::unit();
    Q falling(1);
    for (int N = 1; N <= m + 1; ++N) {
      PolyDiff<Q> next(1);
      for (const auto& x : pool) next += phi(x, prm, cur);
      cur = next;
      falling *= Q(m + 1 - N);
      ConcretePolyDiff rhs;
      for (const auto& X : all_sequences(pool, N, N)) {
        if (!std::is_sorted(X.begin(), X.end())) continue;
        RatFunc f(falling);
        for (const auto& x : X) f = f * RatFunc::inverse(t_of(x) - z_of(0));
        rhs.add(support_of(X), f);
      }
      ++ch.cases;
      if (!identity_test(realize(cur * (1 / factorial_q(N))), rhs).equal)
        ch.fail("m=" + std::to_string(m) + " N=" + std::to_string(N));
    }
    ++ch.cases;
    if (!cur.is_zero()) ch.fail("Phi^(m+1)(1) nonzero for m=" + std::to_string(m));
  }
  return ch;
}

inline std::vector<PolyDiff<Q>> bracket_test_elements(const ColoredIndex& j1, const ColoredIndex& j2) {
  return {PolyDiff<Q>::unit(), PolyDiff<Q>::zeta1(Seq{j1}), PolyDiff<Q>::zeta1(Seq{j1, j2})};
}

// [Phi_{i_N}, [..., [Phi_{i_1}, Phi_o]]] against its closed form.
inline Check check_bracket_identity(int max_N = 4, std::uint64_t seed = 9) {
  Check ch{"nested Phi bracket closed form"};
  const ColoredIndex o{1, 0}, j1{2, 0}, j2{2, 1};
  for (int cval : {-1, -2, -3}) {
    for (Q a : {Q(2), Q(-3, 2)}) {
      const Q c(cval), cc(make_q(cval - 1, 2));
      for (int N = 1; N <= max_N; ++N) {
        auto I = index_range(0, 1, N);
        TableParams tp;
        tp.seed = seed + std::uint64_t(N);
        for (const auto& x : I) {
          for (const auto& y : I) tp.c[{x, y}] = a;
          tp.c[{x, o}] = c;
          tp.c[{o, x}] = cc;
        }
        auto prm = tp.params();
        // a non-monotone labelling of I
        Seq Iseq(I.rbegin(), I.rend());
        std::swap(Iseq.front(), Iseq.back());
        const ColoredIndex last = Iseq.back();
        RatFunc prod(Q(1));
        for (std::size_t k = 0; k + 1 < Iseq.size(); ++k) {
          RatFunc f = RatFunc(c) * RatFunc::inverse(t_of(o) - t_of(Iseq[k]));
          for (std::size_t l = k + 1; l < Iseq.size(); ++l)
            f += RatFunc(a) * RatFunc::inverse(t_of(Iseq[l]) - t_of(Iseq[k]));
          prod = prod * f;
        }
        prod = prod * RatFunc::inverse(t_of(o) - t_of(last));
        for (const auto& v : bracket_test_elements(j1, j2)) {
          // d = 0 is the outermost bracket, with i_N
          std::function<PolyDiff<Q>(std::size_t, const PolyDiff<Q>&)> outer = [&](std::size_t d,
                                                                                 const PolyDiff<Q>& u) {
            if (d == Iseq.size()) return phi(o, prm, u);
            const ColoredIndex x = Iseq[d];
            return PolyDiff<Q>(phi(x, prm, outer(d + 1, u)) - outer(d + 1, phi(x, prm, u)));
          };
          auto lhs = realize(outer(0, v));
          ConcretePolyDiff num = (ConcretePolyDiff::dt(support_of(Iseq)) * realize(phi(o, prm, v))).times(RatFunc(c));
          for (const auto& i : Iseq) {
            Support X = support_minus(support_of(Iseq), i);
            X.insert(std::upper_bound(X.begin(), X.end(), o), o);
            num += (ConcretePolyDiff::dt(X) * realize(phi(i, prm, v))).times(RatFunc(cc));
          }
          ++ch.cases;
          if (!identity_test(lhs, num.times(prod)).equal)
            ch.fail("c=" + std::to_string(cval) + " a=" + a.get_str() + " N=" + std::to_string(N) + " on " + v.str());
        }
      }
    }
  }
  return ch;
}

// (ad Phi)^N / N! (Phi_o) for Phi = sum over a class with c = 2 inside it.
// The closed form keeps one factor 1/(t_o - t_x) per x. Vanishing at N = 1 - c
// is checked on its own.
inline Check check_serre_type(int max_N = 4, std::uint64_t seed = 13) {
  Check ch{"Serre-type closed form and vanishing"};
  const ColoredIndex o{1, 0}, j1{2, 0}, j2{2, 1};
  for (int cval : {-1, -2, -3}) {
    for (int N = 1; N <= max_N; ++N) {
      const Q c(cval), cc(-2);
      auto J = index_range(0, 1, N + 1);
      TableParams tp;
      tp.seed = seed;
      for (const auto& x : J) {
        for (const auto& y : J) tp.c[{x, y}] = Q(2);
        tp.c[{x, o}] = c;
        tp.c[{o, x}] = cc;
      }
      auto prm = tp.params();
      Q pre(1);
      for (int j = 1; j < N; ++j) pre *= c + j;
      for (const auto& v : bracket_test_elements(j1, j2)) {
        auto F = [&](const PolyDiff<Q>& u) {
          PolyDiff<Q> out(u.n());
          for (const auto& x : J) out += phi(x, prm, u);
          return out;
        };
        PolyDiff<Q> lhs(1), fj = v;
        Q binom(1);
        for (int j = 0; j <= N; ++j) {
          PolyDiff<Q> term = phi(o, prm, fj);
          for (int t = 0; t < N - j; ++t) term = F(term);
          lhs += term * (j % 2 ? -binom : binom);
          binom = binom * (N - j) / (j + 1);
          fj = F(fj);
        }
        lhs *= 1 / factorial_q(N);
        ConcretePolyDiff rhs;
        for (const auto& Xs : all_sequences(J, N, N)) {
          if (!std::is_sorted(Xs.begin(), Xs.end())) continue;
          Support X = support_of(Xs);
          RatFunc den(Q(1));
          for (const auto& x : X) den = den * RatFunc::inverse(t_of(o) - t_of(x));
          ConcretePolyDiff part = (ConcretePolyDiff::dt(X) * realize(phi(o, prm, v))).times(RatFunc(c));
          for (const auto& i : X) {
            Support Xi = support_minus(X, i);
            Xi.insert(std::upper_bound(Xi.begin(), Xi.end(), o), o);
            part += (ConcretePolyDiff::dt(Xi) * realize(phi(i, prm, v))).times(RatFunc(cc));
          }
          rhs += part.times(den);
        }
        ++ch.cases;
        if (!identity_test(realize(lhs), rhs.times(RatFunc(pre))).equal)
          ch.fail("closed form, c=" + std::to_string(cval) + " N=" + std::to_string(N) + " on " + v.str());
        if (N == 1 - cval) {
          ++ch.cases;
          if (!lhs.is_zero()) ch.fail("Serre vanishing, c=" + std::to_string(cval) + " on " + v.str());
        }
      }
    }
  }
  return ch;
}

// [E_x, Phi_y] is zero except in two cases. When x = y is absent from I it is
// multiplication by p_x - c_{x,I}. When I = xJ it is -Phi_x(zeta_J), because
// Phi_x kills zeta_I while E_x strips the head.
inline Check check_ef_commutator(int pool_size = 4, int max_len = 4) {
  Check ch{"E and Phi commutator"};
  auto pool = index_range(0, 1, pool_size);
  auto ext = pool;
  ext.push_back(ColoredIndex{0, 50});
  // symbolic p and c
  PhiParams<Poly> prm;
  prm.p = [](const ColoredIndex& x, int) { return pvar(var_param("p" + std::to_string(x.ordinal))); };
  prm.c = [](const ColoredIndex& x, const ColoredIndex& y) {
    return pvar(var_param("c" + std::to_string(x.ordinal) + "_" + std::to_string(y.ordinal)));
  };
  for (const auto& I : all_sequences(pool, 0, max_len)) {
    auto a = PolyDiff<Poly>::zeta1(I);
    for (const auto& x : ext)
      for (const auto& y : ext) {
        auto lhs = residue_at_infinity(x, phi(y, prm, a)) - phi(y, prm, residue_at_infinity(x, a));
        PolyDiff<Poly> rhs(1);
        if (x == y && !contains(I, x)) {
          Poly s = prm.p(x, 0);
          for (const auto& i : I) s -= prm.c(x, i);
          rhs = a * s;
        } else if (x == y && !I.empty() && I.front() == x) {
          rhs = -phi(x, prm, PolyDiff<Poly>::zeta1(Seq(I.begin() + 1, I.end())));
        }
        ++ch.cases;
        if (!(lhs == rhs)) ch.fail("x=" + to_string(x) + " y=" + to_string(y) + " on " + to_string(I));
      }
  }
  return ch;
}

}  // namespace pdiff
