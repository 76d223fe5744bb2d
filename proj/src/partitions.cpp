#include "locus/partitions.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace locus {

Partition Partition::from_blocks(int ground_size,
                                 std::vector<std::vector<int>> blocks) {
  if (ground_size < 1) throw ShapeError("shape: ground set must be non-empty");
  std::vector<int> seen(static_cast<size_t>(ground_size), 0);
  for (auto& b : blocks) {
    if (b.empty()) throw ShapeError("shape: empty block");
    std::sort(b.begin(), b.end());
    for (int x : b) {
      if (x < 0 || x >= ground_size)
        throw ShapeError("shape: block element out of range");
      if (seen[static_cast<size_t>(x)]++)
        throw ShapeError("shape: blocks are not disjoint");
    }
  }
  for (int x = 0; x < ground_size; ++x)
    if (!seen[static_cast<size_t>(x)])
      throw ShapeError("shape: blocks do not cover the ground set");
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Partition p;
  p.ground_size = ground_size;
  p.blocks = std::move(blocks);
  return p;
}

Partition Partition::finest(int n) {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) blocks.push_back({i});
  return from_blocks(n, std::move(blocks));
}

Partition Partition::one_block(int n) {
  std::vector<int> all(static_cast<size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  return from_blocks(n, {all});
}

std::string Partition::to_string() const {
  std::ostringstream out;
  out << '{';
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (b) out << '|';
    for (size_t i = 0; i < blocks[b].size(); ++i) {
      if (i) out << ' ';
      out << blocks[b][i];
    }
  }
  out << '}';
  return out.str();
}

PartitionFamily enumerate_partitions(int n) {
  if (n < 1 || n > 10)
    throw std::invalid_argument("too-large: partition enumeration supports 1 <= n <= 10");
  PartitionFamily family;
  family.ground_size = n;
  // Restricted growth strings: a[0]=0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(static_cast<size_t>(n), 0);
  while (true) {
    int nblocks = *std::max_element(a.begin(), a.end()) + 1;
    std::vector<std::vector<int>> blocks(static_cast<size_t>(nblocks));
    for (int i = 0; i < n; ++i) blocks[static_cast<size_t>(a[static_cast<size_t>(i)])].push_back(i);
    family.members.push_back(Partition::from_blocks(n, std::move(blocks)));

    int i = n - 1;
    for (; i > 0; --i) {
      int mx = 0;
      for (int j = 0; j < i; ++j) mx = std::max(mx, a[static_cast<size_t>(j)]);
      if (a[static_cast<size_t>(i)] <= mx) break;
    }
    if (i == 0) break;
    ++a[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) a[static_cast<size_t>(j)] = 0;
  }
  return family;
}

bool refines(const Partition& fine, const Partition& coarse) {
  if (fine.ground_size != coarse.ground_size)
    throw ShapeError("shape: ground set mismatch");
  std::vector<int> block_of(static_cast<size_t>(coarse.ground_size));
  for (size_t b = 0; b < coarse.blocks.size(); ++b)
    for (int x : coarse.blocks[b]) block_of[static_cast<size_t>(x)] = static_cast<int>(b);
  for (const auto& fb : fine.blocks) {
    const int target = block_of[static_cast<size_t>(fb.front())];
    for (int x : fb)
      if (block_of[static_cast<size_t>(x)] != target) return false;
  }
  return true;
}

PartitionFamily maximal_members(const PartitionFamily& family) {
  PartitionFamily out;
  out.ground_size = family.ground_size;
  for (const auto& p : family.members) {
    bool maximal = true;
    for (const auto& q : family.members)
      if (!(q == p) && refines(q, p)) {
        maximal = false;
        break;
      }
    if (maximal) out.members.push_back(p);
  }
  return out;
}

std::pair<Partition, Partition> partition_meet_join(const Partition& a,
                                                    const Partition& b) {
  if (a.ground_size != b.ground_size)
    throw ShapeError("shape: ground set mismatch");
  const int n = a.ground_size;

  std::vector<int> ab(static_cast<size_t>(n)), bb(static_cast<size_t>(n));
  for (size_t i = 0; i < a.blocks.size(); ++i)
    for (int x : a.blocks[i]) ab[static_cast<size_t>(x)] = static_cast<int>(i);
  for (size_t i = 0; i < b.blocks.size(); ++i)
    for (int x : b.blocks[i]) bb[static_cast<size_t>(x)] = static_cast<int>(i);

  // Meet: nonempty pairwise block intersections.
  std::vector<std::vector<int>> meet_blocks;
  {
    std::vector<std::pair<int, int>> key(static_cast<size_t>(n));
    for (int x = 0; x < n; ++x) key[static_cast<size_t>(x)] = {ab[static_cast<size_t>(x)], bb[static_cast<size_t>(x)]};
    for (int x = 0; x < n; ++x) {
      bool placed = false;
      for (auto& blk : meet_blocks)
        if (key[static_cast<size_t>(blk.front())] == key[static_cast<size_t>(x)]) {
          blk.push_back(x);
          placed = true;
          break;
        }
      if (!placed) meet_blocks.push_back({x});
    }
  }

  // Join: union-find over shared-block adjacency.
  std::vector<int> parent(static_cast<size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
    return x;
  };
  auto unite = [&](int x, int y) { parent[static_cast<size_t>(find(x))] = find(y); };
  for (const auto& blk : a.blocks)
    for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
  for (const auto& blk : b.blocks)
    for (size_t i = 1; i < blk.size(); ++i) unite(blk[0], blk[i]);
  std::vector<std::vector<int>> join_blocks;
  std::vector<int> root_block(static_cast<size_t>(n), -1);
  for (int x = 0; x < n; ++x) {
    int r = find(x);
    if (root_block[static_cast<size_t>(r)] < 0) {
      root_block[static_cast<size_t>(r)] = static_cast<int>(join_blocks.size());
      join_blocks.push_back({});
    }
    join_blocks[static_cast<size_t>(root_block[static_cast<size_t>(r)])].push_back(x);
  }

  return {Partition::from_blocks(n, std::move(meet_blocks)),
          Partition::from_blocks(n, std::move(join_blocks))};
}

}  // namespace locus
