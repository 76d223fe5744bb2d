#pragma once

#include <string>
#include <utility>
#include <vector>

#include "locus/numerics.hpp"

// Set partitions of the subsystem index set {0,...,N-1} with the
// refinement order. Orientation: sigma "precedes" sigma' (is coarser)
// iff sigma' refines sigma, so the maximal members of a family are its
// finest partitions.

namespace locus {

struct Partition {
  int ground_size = 0;
  // Disjoint, non-empty, covering blocks; each block sorted ascending and
  // the block list sorted by least element (canonical form).
  std::vector<std::vector<int>> blocks;

  static Partition from_blocks(int ground_size,
                               std::vector<std::vector<int>> blocks);
  static Partition finest(int ground_size);    // all singletons
  static Partition one_block(int ground_size);

  int block_count() const { return static_cast<int>(blocks.size()); }
  std::string to_string() const;  // e.g. "{0 2|1}"
  bool operator==(const Partition& o) const = default;
};

struct PartitionFamily {
  int ground_size = 0;
  std::vector<Partition> members;  // no duplicates (canonical form)
};

// All set partitions via restricted growth strings; |result| = Bell(n).
// Guarded at n <= 10.
PartitionFamily enumerate_partitions(int n);

// Every block of `fine` lies inside some block of `coarse`.
bool refines(const Partition& fine, const Partition& coarse);

// Members not strictly refined by any other member: the finest ones.
// Output is an antichain.
PartitionFamily maximal_members(const PartitionFamily& family);

// Lattice meet (common refinement) and join (transitive closure of block
// overlap).
std::pair<Partition, Partition> partition_meet_join(const Partition& a,
                                                    const Partition& b);

}  // namespace locus
