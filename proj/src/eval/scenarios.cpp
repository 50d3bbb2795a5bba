#include "ngrank/eval/scenarios.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "ngrank/error.hpp"
#include "ngrank/jaccard.hpp"
#include "ngrank/ttng.hpp"

namespace ngrank::eval {

namespace {

struct Point {
  const char* name;
  double x;
  double y;
  const char* label;
};

// Planted layouts, L1 distances. Every neighbourhood that matters clears its
// boundary by at least 0.1, so a 0.01 jitter keeps the sets intact.
constexpr std::array<Point, 19> kOutlierLayout = {{
    {"A", 1.28, -1.9, "manifold"},  {"B", -0.56, -2.15, "manifold"},
    {"C", 0.8, -0.6, "manifold"},   {"D", 2.8, -0.42, "manifold"},
    {"E", -0.48, 0.07, "manifold"}, {"F", -0.36, -0.05, "manifold"},
    {"G", 0.92, 1.08, "manifold"},  {"H", 0.91, 0.9, "manifold"},
    {"I", 3.73, 1.74, "manifold"},  {"O", -0.81, -2.18, "outlier"},
    {"O1", -2.91, -1.96, "outlier"}, {"O2", -2.54, -1.6, "outlier"},
    {"P1", -2.48, -3.68, "outlier"}, {"P2", -2.7, -3.54, "outlier"},
    {"P3", -2.37, -0.55, "outlier"}, {"J", 4.88, -2.03, "filler"},
    {"K", -0.26, 4.72, "filler"},   {"L", -5.44, 1.35, "filler"},
    {"M", 3.56, -6.44, "filler"},
}};

constexpr std::array<Point, 15> kManifoldChannel1 = {{
    {"A", 1.78, -4.29, "M1"},  {"B", -2.02, -4.04, "M2"}, {"C", 1.38, -2.53, "M1"},
    {"D", 1.89, -0.74, "M1"},  {"E", -1.85, -1.99, "M2"}, {"F", -4.06, -1.85, "M2"},
    {"G", 4.33, -2.72, "M1"},  {"H", 2.59, -0.81, "M1"},  {"I", 2.01, -0.22, "M1"},
    {"J", 2.06, -0.12, "M1"},  {"K", -1.31, -1.02, "M2"}, {"L", 0.21, -0.58, "M1"},
    {"N1", -0.65, 0.49, "M2"}, {"N2", 0.56, 2.93, "M1"},  {"N3", 2.11, 1.6, "M1"},
}};

constexpr std::array<Point, 15> kManifoldChannel2 = {{
    {"A", 0.0, 0.0, "M1"},     {"B", 20.0, 20.0, "M2"},  {"C", 0.3, 0.0, "M1"},
    {"D", 0.0, 0.3, "M1"},     {"E", 20.3, 20.0, "M2"},  {"F", 20.0, 20.4, "M2"},
    {"G", 0.5, 0.5, "M1"},     {"H", 0.8, 0.1, "M1"},    {"I", 0.1, 0.9, "M1"},
    {"J", 0.9, 0.9, "M1"},     {"K", 20.5, 20.5, "M2"},  {"L", 1.2, 0.3, "M1"},
    {"N1", 20.9, 20.2, "M2"},  {"N2", 0.4, 1.3, "M1"},   {"N3", 1.4, 1.0, "M1"},
}};

template <std::size_t N>
FeatureMatrix realize(const std::array<Point, N>& layout, std::string channel,
                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-0.01, 0.01);
  FeatureMatrix m(std::move(channel), 2);
  for (std::size_t i = 0; i < N; ++i) {
    const double x = layout[i].x + jitter(rng);
    const double y = layout[i].y + jitter(rng);
    const std::array<double, 2> v{x, y};
    m.add(i, v);
  }
  return m;
}

template <std::size_t N>
void fill_names(Scenario& s, const std::array<Point, N>& layout) {
  for (std::size_t i = 0; i < N; ++i) {
    s.names.emplace(layout[i].name, i);
    s.truth.add(i, layout[i].label);
  }
}

class Checker {
 public:
  Checker(const Scenario& s, const NeighborhoodIndex& index) : s_(s), index_(index) {}

  std::vector<ItemId> nbhd(std::string_view who) const {
    const auto list = index_.neighbors(s_.id(who));
    std::vector<ItemId> out;
    for (const auto& n : list) out.push_back(n.id);
    return out;
  }

  JaccardValue j(std::string_view a, std::string_view b) const {
    const auto na = nbhd(a);
    const auto nb = nbhd(b);
    return jaccard(na, nb);
  }

  void expect_set(std::string_view who, std::initializer_list<const char*> members) {
    std::set<ItemId> want;
    for (const char* m : members) want.insert(s_.id(m));
    const auto got = nbhd(who);
    if (std::set<ItemId>(got.begin(), got.end()) != want) {
      fail("neighbourhood of " + std::string(who) + " differs from the planted set");
    }
  }

  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DegenerateError(s_.name + " scenario failed validation: " + what);
  }

  const Scenario& s_;
  const NeighborhoodIndex& index_;
};

std::uint32_t tier3_of(const std::vector<CandidateTiers>& tiers, ItemId item) {
  for (const auto& t : tiers) {
    if (t.item == item) return t.tier3;
  }
  return 0;
}

}  // namespace

ItemId Scenario::id(std::string_view item_name) const {
  const auto it = names.find(std::string(item_name));
  if (it == names.end()) throw UnknownItemError("no item named '" + std::string(item_name) + "'");
  return it->second;
}

std::string Scenario::name_of(ItemId id) const {
  for (const auto& [n, i] : names) {
    if (i == id) return n;
  }
  return std::to_string(id);
}

Scenario gen_outlier_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.name = "outlier";
  s.k = 5;
  s.metric = Metric::kL1;
  fill_names(s, kOutlierLayout);
  s.channels.push_back(realize(kOutlierLayout, "main", rng));
  s.query = s.id("A");

  const auto index = build_index(s.channels[0], s.k, s.metric, 1);
  Checker c(s, index);
  c.expect_set("A", {"A", "B", "C", "D", "O"});
  c.expect_set("O", {"O", "A", "B", "O1", "O2"});
  c.expect_set("B", {"B", "A", "O", "E", "F"});
  c.expect_set("C", {"C", "A", "F", "G", "H"});
  c.expect_set("D", {"D", "A", "C", "H", "I"});
  c.expect_set("O1", {"O1", "O2", "P1", "P2", "P3"});
  c.expect_set("O2", {"O2", "O1", "P1", "P2", "P3"});
  c.expect(c.j("A", "O") == JaccardValue{3, 7}, "J(A,O) != 3/7");
  c.expect(c.j("A", "B") == JaccardValue{3, 7}, "J(A,B) != 3/7");
  c.expect(c.j("A", "C") == JaccardValue{2, 8}, "J(A,C) != 2/8");
  c.expect(c.j("A", "D") == JaccardValue{3, 7}, "J(A,D) != 3/7");

  const NeighborGraph graph(index, s.k, s.k);
  const auto tiers = compute_tiers(graph, QueryCenter::in_sample(graph, s.query));
  const auto t_o = tier3_of(tiers, s.id("O"));
  for (const char* m : {"B", "C", "D"}) {
    c.expect(t_o < tier3_of(tiers, s.id(m)), std::string("tier-3 weight of O not below ") + m);
  }
  s.relations = {
      "N(A) = {A, B, C, D, O}",
      "N(O) = {O, A, B, O1, O2}",
      "N(O1), N(O2) within {O1, O2, P1, P2, P3}",
      "J(A,O) = 3/7, J(A,B) = 3/7, J(A,C) = 2/8, J(A,D) = 3/7",
      "tier-3 weight of O below B, C and D",
  };
  return s;
}

Scenario gen_two_manifold_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scenario s;
  s.name = "two-manifold";
  s.k = 5;
  s.metric = Metric::kL1;
  fill_names(s, kManifoldChannel1);
  s.channels.push_back(realize(kManifoldChannel1, "ch1", rng));
  s.channels.push_back(realize(kManifoldChannel2, "ch2", rng));
  s.query = s.id("A");

  const auto index1 = build_index(s.channels[0], s.k, s.metric, 1);
  Checker c(s, index1);
  c.expect_set("A", {"A", "B", "C", "D", "G"});
  c.expect_set("B", {"B", "A", "E", "F", "K"});
  c.expect_set("C", {"C", "A", "D", "H", "I"});
  c.expect_set("D", {"D", "H", "I", "J", "L"});
  c.expect(c.j("A", "C") > c.j("A", "B") && c.j("A", "B") > c.j("A", "D"),
           "channel 1 weights do not satisfy J(A,C) > J(A,B) > J(A,D)");
  c.expect(c.j("D", "C").value() + c.j("D", "A").value() >
               c.j("B", "C").value() + c.j("B", "A").value(),
           "J(D,C) + J(D,A) does not exceed J(B,C) + J(B,A)");

  const auto index2 = build_index(s.channels[1], s.k, s.metric, 1);
  for (ItemId id : index2.ids()) {
    const auto cls = s.truth.class_of(id);
    for (const auto& n : index2.neighbors(id)) {
      c.expect(s.truth.class_of(n.id) == cls, "channel 2 mixes the manifolds");
    }
  }
  s.relations = {
      "channel 1: N(A) = {A, B, C, D, G}, B from the other manifold",
      "channel 1: J(A,C) > J(A,B) > J(A,D)",
      "channel 1: J(D,C) + J(D,A) > J(B,C) + J(B,A)",
      "channel 2: every neighbourhood stays within its manifold",
  };
  return s;
}

StructuralTrial gen_structural_trial(std::size_t k, double p, std::mt19937_64& rng) {
  if (k < 2) throw InvalidInputError("structural trial needs k >= 2");
  const std::size_t na = k;
  const std::size_t nb = 2 * k;
  std::map<ItemId, std::vector<Neighbor>> lists;

  auto make_list = [](ItemId self, const std::vector<ItemId>& others) {
    std::vector<Neighbor> list{{self, 0.0}};
    for (std::size_t i = 0; i < others.size(); ++i) {
      list.push_back({others[i], static_cast<double>(i + 1)});
    }
    return list;
  };

  std::vector<ItemId> a_rest;
  for (ItemId i = 1; i < na; ++i) a_rest.push_back(i);
  lists.emplace(0, make_list(0, a_rest));

  std::bernoulli_distribution in_class(p);
  std::vector<ItemId> pool_a;
  std::vector<ItemId> pool_b;
  for (ItemId x = 1; x < na; ++x) {
    pool_a.clear();
    for (ItemId i = 0; i < na; ++i) {
      if (i != x) pool_a.push_back(i);
    }
    pool_b.clear();
    for (ItemId i = na; i < na + nb; ++i) pool_b.push_back(i);
    std::shuffle(pool_a.begin(), pool_a.end(), rng);
    std::shuffle(pool_b.begin(), pool_b.end(), rng);
    std::vector<ItemId> slots;
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t s = 0; s + 1 < k; ++s) {
      slots.push_back(in_class(rng) ? pool_a[ia++] : pool_b[ib++]);
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    lists.emplace(x, make_list(x, slots));
  }
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<ItemId> others;
    for (std::size_t step = 1; step < k; ++step) others.push_back(na + (b + step) % nb);
    lists.emplace(na + b, make_list(na + b, others));
  }
  return {NeighborhoodIndex::from_lists("structural", k, Metric::kL1, std::move(lists)), 0, na};
}

Scenario gen_gaussian_channels(const GaussianSpec& spec, std::uint64_t seed) {
  if (spec.classes == 0 || spec.per_class == 0 || spec.dim == 0 || spec.channels == 0) {
    throw InvalidInputError("gaussian scenario dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> centre(0.0, spec.center_spread);
  std::normal_distribution<double> noise(0.0, spec.noise);
  Scenario s;
  s.name = "gaussian";
  s.k = 10;
  s.metric = Metric::kL2;
  const std::size_t n = spec.classes * spec.per_class;
  for (ItemId id = 0; id < n; ++id) s.truth.add(id, "c" + std::to_string(id / spec.per_class));

  std::vector<double> centres(spec.classes * spec.dim);
  std::vector<double> v(spec.dim);
  for (std::size_t ch = 0; ch < spec.channels; ++ch) {
    for (double& c : centres) c = centre(rng);
    FeatureMatrix m("ch" + std::to_string(ch + 1), spec.dim);
    for (ItemId id = 0; id < n; ++id) {
      const std::size_t cls = id / spec.per_class;
      for (std::size_t d = 0; d < spec.dim; ++d) v[d] = centres[cls * spec.dim + d] + noise(rng);
      m.add(id, v);
    }
    s.channels.push_back(std::move(m));
  }
  return s;
}

FeatureMatrix gen_clustered(std::size_t n, std::size_t dim, std::size_t clusters,
                            std::uint64_t seed, std::string channel) {
  if (n == 0 || dim == 0 || clusters == 0) throw InvalidInputError("sizes must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> where(-10.0, 10.0);
  std::normal_distribution<double> spread(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
  std::vector<double> centres(clusters * dim);
  for (double& c : centres) c = where(rng);
  FeatureMatrix m(std::move(channel), dim);
  std::vector<double> v(dim);
  for (ItemId id = 0; id < n; ++id) {
    const std::size_t c = pick(rng);
    for (std::size_t d = 0; d < dim; ++d) v[d] = centres[c * dim + d] + spread(rng);
    m.add(id, v);
  }
  return m;
}

}  // namespace ngrank::eval
