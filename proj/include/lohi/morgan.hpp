#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "lohi/error.hpp"
#include "lohi/fingerprint.hpp"
#include "lohi/smiles.hpp"

namespace lohi {

struct FingerprintConfig {
  int radius = 2;
  std::size_t nbits = 1024;
};

namespace morgan_hash {

// Environment identifiers are built from two fixed functions so fingerprints
// stay stable across releases:
//   mix(x)        = splitmix64 finalizer of x
//   combine(h, v) = mix(h ^ (mix(v) + 0x9e3779b97f4a7c15 + (h << 6) + (h >> 2)))
inline constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
  return mix(h ^ (mix(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline constexpr std::uint64_t kAtomSeed = 0x6c6f68692d61746fULL;
inline constexpr std::uint64_t kLayerSeed = 0x6c6f68692d656e76ULL;

}  // namespace morgan_hash

// Initial identifier from element, heavy degree, formal charge, aromaticity and
// attached hydrogen count.
inline std::uint64_t atom_invariant(const MolecularGraph& mol, std::size_t atom) {
  using namespace morgan_hash;
  const Atom& a = mol.atom(atom);
  std::uint64_t h = kAtomSeed;
  h = combine(h, static_cast<std::uint64_t>(atomic_number(a.element)));
  h = combine(h, static_cast<std::uint64_t>(mol.degree(atom)));
  h = combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(a.charge)));
  h = combine(h, a.aromatic ? 1u : 0u);
  h = combine(h, static_cast<std::uint64_t>(mol.hydrogen_count(atom)));
  return h;
}

// Circular fingerprint: every identifier from radius 0..radius is folded into
// the bit vector by modulo nbits. Each layer hashes the atom's previous id with
// its sorted (bond order, neighbor id) pairs, so the result does not depend on
// atom numbering.
inline Fingerprint morgan_fingerprint(const MolecularGraph& mol, int radius, std::size_t nbits) {
  if (radius < 0) throw InputError("fingerprint radius must be >= 0");
  if (nbits < 64 || (nbits & (nbits - 1)) != 0) {
    throw InputError("fingerprint width must be a power of two >= 64");
  }
  using namespace morgan_hash;
  Fingerprint fp(nbits);
  const std::size_t n = mol.atom_count();
  std::vector<std::uint64_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = atom_invariant(mol, i);
    fp.set(ids[i] % nbits);
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  std::vector<std::uint64_t> next(n);
  for (int layer = 1; layer <= radius; ++layer) {
    for (std::size_t i = 0; i < n; ++i) {
      env.clear();
      for (const auto& [nbr, bond] : mol.neighbors(i)) {
        env.emplace_back(static_cast<std::uint64_t>(mol.bonds()[bond].order), ids[nbr]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = combine(kLayerSeed, static_cast<std::uint64_t>(layer));
      h = combine(h, ids[i]);
      for (const auto& [order, id] : env) h = combine(combine(h, order), id);
      next[i] = h;
      fp.set(h % nbits);
    }
    ids.swap(next);
  }
  return fp;
}

inline Fingerprint morgan_fingerprint(const MolecularGraph& mol, const FingerprintConfig& cfg) {
  return morgan_fingerprint(mol, cfg.radius, cfg.nbits);
}

}  // namespace lohi
