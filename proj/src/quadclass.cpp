#include "specgeo/quadclass.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

namespace specgeo {

BigInt QForm::content() const { return gcd(gcd(p, q), r); }

QForm QForm::compose(const Mat2Z& m) const {
  return {p * m.a * m.a + q * m.a * m.c + r * m.c * m.c,
          2 * p * m.a * m.b + q * (m.a * m.d + m.b * m.c) + 2 * r * m.c * m.d,
          p * m.b * m.b + q * m.b * m.d + r * m.d * m.d};
}

bool operator<(const QForm& x, const QForm& y) {
  if (x.p != y.p) return x.p < y.p;
  if (x.q != y.q) return x.q < y.q;
  return x.r < y.r;
}

std::string to_string(const QForm& f) {
  std::ostringstream os;
  os << "(" << f.p << ", " << f.q << ", " << f.r << ")";
  return os.str();
}

void require_geodesic_matrix(const Mat2Z& A) {
  if (A.trace() != 0) throw PreconditionError("matrix must have trace zero");
  if (A.det() >= 0) throw PreconditionError("matrix must have negative determinant");
}

QForm form_from_matrix(const Mat2Z& A) {
  require_geodesic_matrix(A);
  return {A.c, -2 * A.a, -A.b};
}

QForm form_from_matrix(const GeodesicMatrix& A) { return form_from_matrix(A.matrix()); }

Mat2Z matrix_from_form(const QForm& f) {
  if (f.q % 2 != 0) throw PreconditionError("form needs an even middle coefficient");
  if (f.disc() <= 0) throw PreconditionError("form must be indefinite");
  BigInt h = f.q / 2;
  return {-h, -f.r, f.p, h};
}

namespace {

// Reduction predicates on a primitive form of discriminant D, s = isqrt(D).
bool reduced_primitive(const QForm& g, const BigInt& s) {
  BigInt twice_p = 2 * mp::abs(g.p);
  return g.q >= 1 && g.q <= s && twice_p + g.q >= s + 1 && twice_p - g.q <= s;
}

std::pair<QForm, Mat2Z> rho_with(const QForm& f, const BigInt& D, const BigInt& s) {
  const BigInt& r = f.r;
  require(r != 0, "rho needs r != 0");
  BigInt ar = mp::abs(r), two_r = 2 * ar;
  BigInt qn;
  if (ar > s) {
    qn = (-f.q) % two_r;
    if (qn < 0) qn += two_r;
    if (qn > ar) qn -= two_r;
  } else {
    BigInt m = (s + f.q) % two_r;
    if (m < 0) m += two_r;
    qn = s - m;
  }
  BigInt t = (f.q + qn) / (2 * r);
  QForm out{r, qn, (qn * qn - D) / (4 * r)};
  return {out, Mat2Z{0, -1, 1, t}};
}

void require_nonsquare_disc(const BigInt& D) {
  if (D <= 0) throw PreconditionError("form must be indefinite (disc > 0)");
  if (is_perfect_square(D)) throw PreconditionError("square discriminant: use the brute-force path");
}

}  // namespace

bool is_reduced(const QForm& f) {
  BigInt k = f.content();
  QForm g{f.p / k, f.q / k, f.r / k};
  BigInt D = g.disc();
  require_nonsquare_disc(D);
  return reduced_primitive(g, isqrt(D));
}

std::pair<QForm, Mat2Z> rho(const QForm& f) {
  BigInt k = f.content();
  QForm g{f.p / k, f.q / k, f.r / k};
  BigInt D = g.disc();
  require_nonsquare_disc(D);
  auto [h, m] = rho_with(g, D, isqrt(D));
  return {h.scaled(k), m};
}

Reduction reduce(const QForm& f) {
  BigInt k = f.content();
  QForm g{f.p / k, f.q / k, f.r / k};
  BigInt D = g.disc();
  require_nonsquare_disc(D);
  BigInt s = isqrt(D);
  Reduction out{g, Mat2Z::identity(), 0};
  while (!reduced_primitive(out.form, s)) {
    if (out.steps > 100000) throw ConvergenceError("form reduction did not terminate");
    auto [h, m] = rho_with(out.form, D, s);
    out.form = h;
    out.transform = out.transform * m;
    ++out.steps;
  }
  out.form = out.form.scaled(k);
  return out;
}

std::vector<QForm> reduced_cycle(const QForm& f) {
  QForm start = reduce(f).form;
  BigInt k = start.content();
  QForm g{start.p / k, start.q / k, start.r / k};
  BigInt D = g.disc();
  BigInt s = isqrt(D);
  std::vector<QForm> cycle{start};
  QForm cur = g;
  for (;;) {
    cur = rho_with(cur, D, s).first;
    if (cur == g) break;
    cycle.push_back(cur.scaled(k));
  }
  return cycle;
}

QForm cycle_key(const QForm& f) {
  auto c = reduced_cycle(f);
  return *std::min_element(c.begin(), c.end());
}

ClassSet enumerate_classes(const BigInt& N) {
  if (N < 2) throw PreconditionError("enumerate_classes needs N >= 2");
  if (is_perfect_square(N)) throw PreconditionError("square N: use the brute-force path");
  const BigInt four_n = 4 * N;

  struct Entry {
    BigInt k;
    QForm key;
    std::vector<QForm> cycle;
  };
  std::vector<Entry> classes;

  for (BigInt k = 1; k * k <= four_n; ++k) {
    if (four_n % (k * k) != 0) continue;
    BigInt D = four_n / (k * k);
    BigInt dmod = D % 4;
    if (dmod != 0 && dmod != 1) continue;
    BigInt s = isqrt(D);
    std::set<QForm> pool;
    for (BigInt q = 1; q <= s; ++q) {
      if ((q * q - D) % 4 != 0) continue;
      if ((k * q) % 2 != 0) continue;  // the scaled form needs an even middle term
      BigInt M = (D - q * q) / 4;
      for (BigInt a = 1; a * a <= M; ++a) {
        if (M % a != 0) continue;
        for (const BigInt& ap : {a, BigInt(M / a)}) {
          if (!(2 * ap + q >= s + 1 && 2 * ap - q <= s)) continue;
          for (int sign : {1, -1}) {
            QForm g{ap * sign, q, -(M / ap) * sign};
            if (g.content() == 1) pool.insert(g);
          }
        }
      }
    }
    while (!pool.empty()) {
      QForm g = *pool.begin();
      Entry e{k, g, {}};
      QForm cur = g;
      do {
        if (!pool.count(cur)) throw ConvergenceError("reduced cycle left the enumerated set");
        pool.erase(cur);
        e.cycle.push_back(cur.scaled(k));
        cur = rho_with(cur, D, s).first;
      } while (!(cur == g));
      e.key = *std::min_element(e.cycle.begin(), e.cycle.end());
      classes.push_back(std::move(e));
    }
  }

  std::sort(classes.begin(), classes.end(), [](const Entry& x, const Entry& y) {
    if (x.k != y.k) return x.k < y.k;
    return x.key < y.key;
  });

  ClassSet out;
  out.N = N;
  std::map<QForm, std::size_t> index;
  for (const auto& e : classes) {
    QForm best;
    bool found = false;
    for (const auto& f : e.cycle) {
      if (f.p > 0 && (!found || f < best)) {
        best = f;
        found = true;
      }
    }
    if (!found) throw ConvergenceError("reduced cycle without a positive leading form");
    index[e.key] = out.reps.size();
    out.reps.push_back(matrix_from_form(best));
    out.cycles.push_back(e.cycle);
    out.contents.push_back(e.k);
  }
  for (std::size_t i = 0; i < out.reps.size(); ++i) {
    QForm neg = cycle_key(form_from_matrix(-out.reps[i]));
    auto it = index.find(neg);
    if (it == index.end()) throw ConvergenceError("negated class not found in enumeration");
    std::size_t j = it->second;
    if (i <= j) out.tilde_pairs.emplace_back(i, j);
  }
  return out;
}

bool are_conjugate(const Mat2Z& A, const Mat2Z& B) {
  require_geodesic_matrix(A);
  require_geodesic_matrix(B);
  if (A.det() != B.det()) throw PreconditionError("are_conjugate needs equal determinants");
  return cycle_key(form_from_matrix(A)) == cycle_key(form_from_matrix(B));
}

namespace {

std::int64_t to_i64(const BigInt& v) {
  if (v > std::numeric_limits<std::int32_t>::max() || v < std::numeric_limits<std::int32_t>::min())
    throw PreconditionError("brute-force search needs small matrix entries");
  return static_cast<std::int64_t>(v);
}

struct Key {
  std::int64_t a, b, c;
  int last;  // 0: start or S, 1: T run, 2: T^-1 run
  bool operator==(const Key&) const = default;
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {std::uint64_t(k.a), std::uint64_t(k.b), std::uint64_t(k.c),
                            std::uint64_t(k.last)}) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::int64_t height(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::max({std::abs(a), std::abs(b), std::abs(c)});
}

// 0-1 breadth-first search; calls visit(a, b, c) on each matrix reached within
// the syllable budget and stops early when visit returns true.
template <class Visit>
bool syllable_search(const Mat2Z& A, int wordlen, std::int64_t cap, Visit visit) {
  std::unordered_map<Key, int, KeyHash> dist;
  std::deque<std::pair<Key, int>> queue;
  Key start{to_i64(A.a), to_i64(A.b), to_i64(A.c), 0};
  dist[start] = 0;
  queue.emplace_back(start, 0);
  while (!queue.empty()) {
    auto [k, d] = queue.front();
    queue.pop_front();
    if (dist[k] < d) continue;
    if (visit(k.a, k.b, k.c)) return true;
    const std::array<std::pair<Key, int>, 3> moves{{
        {{-k.a, -k.c, -k.b, 0}, 1},
        {{k.a + k.c, k.b - 2 * k.a - k.c, k.c, 1}, k.last == 1 ? 0 : 1},
        {{k.a - k.c, k.b + 2 * k.a - k.c, k.c, 2}, k.last == 2 ? 0 : 1},
    }};
    for (const auto& [nk, cost] : moves) {
      int nd = d + cost;
      if (nd > wordlen || height(nk.a, nk.b, nk.c) > cap) continue;
      auto it = dist.find(nk);
      if (it != dist.end() && it->second <= nd) continue;
      dist[nk] = nd;
      if (cost == 0)
        queue.emplace_front(nk, nd);
      else
        queue.emplace_back(nk, nd);
    }
  }
  return false;
}

}  // namespace

bool are_conjugate_bruteforce(const Mat2Z& A, const Mat2Z& B, int wordlen,
                              std::int64_t height_cap) {
  require(wordlen >= 1, "wordlen must be positive");
  require_geodesic_matrix(A);
  require_geodesic_matrix(B);
  if (A.det() != B.det()) return false;
  const std::int64_t ta = to_i64(B.a), tb = to_i64(B.b), tc = to_i64(B.c);
  std::int64_t cap = height_cap;
  if (cap <= 0) {
    cap = 4 * std::max(height(to_i64(A.a), to_i64(A.b), to_i64(A.c)), height(ta, tb, tc)) + 4;
  }
  return syllable_search(A, wordlen, cap, [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    return a == ta && b == tb && c == tc;
  });
}

std::set<std::vector<std::int64_t>> conjugacy_orbit(const Mat2Z& A, int wordlen,
                                                    std::int64_t height_cap) {
  require(wordlen >= 0, "wordlen must be non-negative");
  require(height_cap > 0, "height_cap must be positive");
  require_geodesic_matrix(A);
  std::set<std::vector<std::int64_t>> out;
  syllable_search(A, wordlen, height_cap, [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    out.insert({a, b, c, -a});
    return false;
  });
  return out;
}

PellSolution pell_min(const BigInt& N) {
  if (N < 2 || is_perfect_square(N)) throw PreconditionError("pell_min needs non-square N >= 2");
  const BigInt a0 = isqrt(N);
  BigInt m = 0, d = 1, a = a0;
  BigInt h_prev = 1, h = a0, k_prev = 0, k = 1;
  while (h * h - N * k * k != 1) {
    m = d * a - m;
    d = (N - m * m) / d;
    a = (a0 + m) / d;
    BigInt h_next = a * h + h_prev, k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return {h, k};
}

Mat2Z fundamental_automorph(const Mat2Z& A) {
  require_geodesic_matrix(A);
  BigInt N = -A.det();
  if (is_perfect_square(N))
    throw PreconditionError("split torus: square determinant has no hyperbolic automorph");
  PellSolution s = pell_min(N);
  return {s.t + s.u * A.a, s.u * A.b, s.u * A.c, s.t + s.u * A.d};
}

}  // namespace specgeo
