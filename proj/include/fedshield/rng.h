// Copyright 2026 The FedShield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDSHIELD_RNG_H_
#define FEDSHIELD_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fedshield {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a path of integer
// tags, e.g. DeriveSeed(master, {kTagTrain, round, client}). Order matters.
inline uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> tags) {
  uint64_t h = MixBits(base);
  for (uint64_t tag : tags) h = MixBits(h ^ MixBits(tag + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace fedshield

#endif  // FEDSHIELD_RNG_H_
