#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <iterator>
#include <string>
#include <vector>

#include "lohi/lohi.hpp"

namespace lohi::synth {

inline Fingerprint random_fingerprint(std::mt19937_64& rng, std::size_t nbits, double density) {
  Fingerprint fp(nbits);
  std::bernoulli_distribution on(density);
  for (std::size_t b = 0; b < nbits; ++b) {
    if (on(rng)) fp.set(b);
  }
  return fp;
}

inline Fingerprint random_bits(std::mt19937_64& rng, std::size_t nbits, std::size_t count) {
  Fingerprint fp(nbits);
  std::uniform_int_distribution<std::size_t> bit(0, nbits - 1);
  while (fp.popcount() < count) fp.set(bit(rng));
  return fp;
}

// Keeps each bit of `base` with probability keep and adds `extra` random bits.
inline Fingerprint perturb(std::mt19937_64& rng, const Fingerprint& base, double keep, std::size_t extra) {
  Fingerprint fp(base.width());
  std::bernoulli_distribution k(keep);
  for (std::size_t b : base.on_bits()) {
    if (k(rng)) fp.set(b);
  }
  std::uniform_int_distribution<std::size_t> bit(0, base.width() - 1);
  for (std::size_t i = 0; i < extra; ++i) fp.set(bit(rng));
  return fp;
}

// Mix of two bases: each bit of a kept with keep_a, each bit of b with keep_b.
inline Fingerprint blend(std::mt19937_64& rng, const Fingerprint& a, const Fingerprint& b, double keep_a,
                         double keep_b) {
  Fingerprint fp(a.width());
  std::bernoulli_distribution ka(keep_a), kb(keep_b);
  for (std::size_t bit : a.on_bits()) {
    if (ka(rng)) fp.set(bit);
  }
  for (std::size_t bit : b.on_bits()) {
    if (kb(rng)) fp.set(bit);
  }
  return fp;
}

struct IslandOptions {
  std::size_t n = 500;
  std::size_t nbits = 1024;
  std::size_t base_bits = 60;
  std::size_t min_island = 4;
  std::size_t max_island = 12;  // further capped at n / 25 for small n
  double keep = 0.85;
  std::size_t extra = 6;
  double bridge_fraction = 0.10;  // molecules that blend two islands
  double noise_fraction = 0.05;   // sparse unrelated molecules
  double value_spread = 1.0;      // per-molecule activity noise around the island mean
};

// Planted similarity islands chained by bridge molecules, plus noise.
// Every record carries a continuous value.
inline Dataset make_island_dataset(std::uint64_t seed, const IslandOptions& o = {}) {
  std::mt19937_64 rng(seed);
  const std::size_t n_noise = static_cast<std::size_t>(o.noise_fraction * static_cast<double>(o.n));
  const std::size_t n_bridge = static_cast<std::size_t>(o.bridge_fraction * static_cast<double>(o.n));
  const std::size_t n_island = o.n - n_noise - n_bridge;

  std::vector<Fingerprint> bases;
  std::vector<double> means;
  std::vector<Fingerprint> fps;
  std::vector<double> values;
  std::normal_distribution<double> spread(0.0, o.value_spread);
  std::uniform_real_distribution<double> mean_dist(5.5, 8.5);
  const std::size_t max_island = std::max(o.min_island, std::min(o.max_island, std::max<std::size_t>(6, o.n / 25)));
  std::uniform_int_distribution<std::size_t> island_size(o.min_island, max_island);

  std::uniform_int_distribution<std::size_t> bit(0, o.nbits - 1);
  while (fps.size() < n_island) {
    // Consecutive bases share about half their bits so bridges can join them.
    Fingerprint base(o.nbits);
    if (!bases.empty()) {
      for (std::size_t b : bases.back().on_bits()) {
        if (base.popcount() * 2 >= o.base_bits) break;
        if (bit(rng) % 2 == 0) base.set(b);
      }
    }
    while (base.popcount() < o.base_bits) base.set(bit(rng));
    bases.push_back(std::move(base));
    means.push_back(mean_dist(rng));
    const std::size_t size = std::min(island_size(rng), n_island - fps.size());
    for (std::size_t i = 0; i < size; ++i) {
      fps.push_back(perturb(rng, bases.back(), o.keep, o.extra));
      values.push_back(means.back() + spread(rng));
    }
  }
  for (std::size_t i = 0; i < n_bridge; ++i) {
    // Consecutive islands only, so the chain is a path rather than a ring.
    const std::size_t a = bases.size() < 2 ? 0 : i % (bases.size() - 1);
    const std::size_t b = std::min(a + 1, bases.size() - 1);
    fps.push_back(blend(rng, bases[a], bases[b], 0.8, 0.8));
    values.push_back(0.5 * (means[a] + means[b]) + spread(rng));
  }
  std::uniform_real_distribution<double> noise_value(5.0, 9.0);
  for (std::size_t i = 0; i < n_noise; ++i) {
    fps.push_back(random_bits(rng, o.nbits, 25));
    values.push_back(noise_value(rng));
  }

  // Shuffle so that dataset order carries no structure.
  const auto perm = seeded_permutation(fps.size(), seed ^ 0x5a5a5a5aULL);
  Dataset ds;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    Record r;
    r.id = "m" + std::to_string(i);
    r.fingerprint = fps[perm[i]];
    r.value = values[perm[i]];
    ds.add(std::move(r));
  }
  return ds;
}

// Random graph with weights 1..3 and bounds that some assignment satisfies.
inline KCutProblem random_kcut_problem(std::mt19937_64& rng, std::size_t n, int k, double edge_p) {
  std::uniform_int_distribution<Weight> w(1, 3);
  std::bernoulli_distribution edge(edge_p);
  std::vector<Weight> weights(n);
  for (auto& x : weights) x = w(rng);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (edge(rng)) edges.emplace_back(u, v);
    }
  }
  KCutProblem p;
  p.graph = WeightedGraph::from_edges(weights, edges);
  p.k = k;

  // Witness: random labels, then drop one endpoint of every cross edge.
  std::uniform_int_distribution<int> label(0, k);
  std::vector<int> a(n);
  for (auto& x : a) x = label(rng);
  for (const auto& [u, v] : edges) {
    if (a[u] != 0 && a[v] != 0 && a[u] != a[v]) a[v] = 0;
  }
  std::vector<Weight> part(static_cast<std::size_t>(k) + 1, 0);
  for (std::size_t v = 0; v < n; ++v) part[a[v]] += weights[v];
  for (int i = 1; i <= k; ++i) {
    std::uniform_int_distribution<Weight> b(0, part[i]);
    p.bounds.push_back(b(rng));
  }
  return p;
}

// Random similarity graph with edge similarities in [threshold, 1].
inline SimGraph random_sim_graph(std::mt19937_64& rng, std::size_t n, double edge_p, double threshold) {
  std::bernoulli_distribution edge(edge_p);
  std::uniform_real_distribution<double> sim(threshold, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<double> sims;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (edge(rng)) {
        edges.emplace_back(u, v);
        sims.push_back(sim(rng));
      }
    }
  }
  return SimGraph::from_edges(n, edges, sims, threshold);
}

// Largest set of pairwise dissimilar fingerprints, by exhaustive subset search.
inline std::size_t brute_force_max_packing(const std::vector<Fingerprint>& fps, double threshold) {
  const std::size_t n = fps.size();
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && tanimoto(fps[i], fps[j]) >= threshold) conflict[i] |= 1u << j;
    }
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if ((mask >> i) & 1u) ok = (conflict[i] & mask) == 0;
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
  }
  return best;
}

// Counts train x test pairs at or above threshold from sorted on-bit lists,
// without going through the word-level popcount path.
inline std::size_t leaking_pairs(const Dataset& ds, const Fold& fold, double threshold) {
  std::vector<std::vector<std::size_t>> bits(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) bits[i] = ds[i].fingerprint.on_bits();
  std::size_t count = 0;
  std::vector<std::size_t> common;
  for (std::size_t t : fold.test) {
    for (std::size_t r : fold.train) {
      common.clear();
      std::set_intersection(bits[t].begin(), bits[t].end(), bits[r].begin(), bits[r].end(),
                            std::back_inserter(common));
      const std::size_t uni = bits[t].size() + bits[r].size() - common.size();
      if (uni > 0 && static_cast<double>(common.size()) / static_cast<double>(uni) >= threshold) ++count;
    }
  }
  return count;
}

// Same molecule with atoms renumbered by perm (new index perm[i] for old atom i).
inline MolecularGraph permute_atoms(const MolecularGraph& mol, const std::vector<std::size_t>& perm) {
  std::vector<Atom> atoms(mol.atom_count());
  for (std::size_t i = 0; i < mol.atom_count(); ++i) atoms[perm[i]] = mol.atom(i);
  std::vector<Bond> bonds;
  for (const Bond& b : mol.bonds()) bonds.push_back({perm[b.begin], perm[b.end], b.order});
  return MolecularGraph::create(std::move(atoms), std::move(bonds));
}

inline const std::vector<std::string>& drug_like_smiles() {
  static const std::vector<std::string> kSmiles = {
      "CC(=O)Oc1ccccc1C(=O)O",
      "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
      "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
      "CC(=O)Nc1ccc(O)cc1",
      "c1ccc2c(c1)cc1ccc3cccc4ccc2c1c34",
      "OC(=O)CCc1ccccc1",
      "CCN(CC)CCNC(=O)c1ccc(N)cc1",
      "Clc1ccc(cc1)C(c1ccccc1)N1CCNCC1",
      "COc1ccc2[nH]cc(CCN)c2c1",
      "NC(=O)c1cccnc1",
      "C1CCC(CC1)NC(=O)Nc1ccccc1",
      "O=C1CCCN1",
      "FC(F)(F)c1ccc(Oc2ccccc2)cc1",
      "CS(=O)(=O)Nc1ccccc1",
      "N#Cc1ccc(cc1)C(=O)N",
      "[NH3+]CC(=O)[O-]",
      "C1=CC=C(C=C1)O",
      "CC1=CC(=O)C=CC1=O",
      "OCC1OC(O)C(O)C(O)C1O",
      "Brc1cncc(c1)C#CC",
  };
  return kSmiles;
}

}  // namespace lohi::synth
