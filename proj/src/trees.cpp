#include "epirk/trees.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace epirk {

std::strong_ordering operator<=>(const Tree& x, const Tree& y) {
  if (auto c = tree_order(x) <=> tree_order(y); c != 0) return c;
  if (auto c = x.fat <=> y.fat; c != 0) return c;
  return std::lexicographical_compare_three_way(x.kids.begin(), x.kids.end(),
                                                y.kids.begin(), y.kids.end());
}

Tree make_tree(bool fat, std::vector<Tree> kids) {
  if (fat && kids.size() != 1)
    throw std::invalid_argument("fat vertex must have exactly one child");
  std::sort(kids.begin(), kids.end());
  return Tree{fat, std::move(kids)};
}

int tree_order(const Tree& t) {
  int n = 1;
  for (const Tree& k : t.kids) n += tree_order(k);
  return n;
}

long long tree_sigma(const Tree& t) {
  // sigma(t) = prod over distinct child shapes of mult! * sigma(child)^mult.
  long long s = 1;
  for (size_t i = 0; i < t.kids.size();) {
    size_t j = i;
    while (j < t.kids.size() && t.kids[j] == t.kids[i]) ++j;
    long long mult = static_cast<long long>(j - i);
    long long cs = tree_sigma(t.kids[i]);
    for (long long r = 1; r <= mult; ++r) s *= r * cs;
    i = j;
  }
  return s;
}

long long tree_density(const Tree& t) {
  long long g = tree_order(t);
  for (const Tree& k : t.kids) g *= tree_density(k);
  return g;
}

bool tree_has_fat(const Tree& t) {
  if (t.fat) return true;
  return std::any_of(t.kids.begin(), t.kids.end(), tree_has_fat);
}

bool tree_is_chain(const Tree& t) {
  const Tree* p = &t;
  while (p->kids.size() == 1) p = &p->kids[0];
  return p->kids.empty();
}

std::string tree_name(const Tree& t) {
  std::string s = t.fat ? "A" : "f";
  if (t.kids.empty()) return s;
  s += '(';
  for (size_t i = 0; i < t.kids.size(); ++i) {
    if (i) s += ',';
    s += tree_name(t.kids[i]);
  }
  s += ')';
  return s;
}

namespace {

// Multisets of children drawn from pool, with total order exactly `budget`.
// pool is ordered; `from` enforces non-decreasing picks so each multiset is
// produced once.
void child_multisets(const std::vector<Tree>& pool, size_t from, int budget,
                     std::vector<Tree>& current,
                     std::vector<std::vector<Tree>>& out) {
  if (budget == 0) {
    out.push_back(current);
    return;
  }
  for (size_t i = from; i < pool.size(); ++i) {
    int w = tree_order(pool[i]);
    if (w > budget) break;
    current.push_back(pool[i]);
    child_multisets(pool, i, budget - w, current, out);
    current.pop_back();
  }
}

std::vector<Tree> enumerate(int max_order, bool allow_fat) {
  std::vector<Tree> all;
  for (int n = 1; n <= max_order; ++n) {
    std::vector<Tree> level;
    // Meagre root over any child multiset of total order n-1.
    std::vector<std::vector<Tree>> sets;
    std::vector<Tree> cur;
    child_multisets(all, 0, n - 1, cur, sets);
    for (auto& s : sets) level.push_back(make_tree(false, std::move(s)));
    if (allow_fat) {
      // Fat root over a single child of order n-1; leaves stay meagre.
      for (const Tree& t : all)
        if (tree_order(t) == n - 1) level.push_back(make_tree(true, {t}));
    }
    std::sort(level.begin(), level.end());
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

}  // namespace

std::vector<Tree> enumerate_tw_trees(int max_order) {
  return enumerate(max_order, true);
}

std::vector<Tree> enumerate_meagre_trees(int max_order) {
  return enumerate(max_order, false);
}

std::vector<Tree> enumerate_tk_trees(int max_order) {
  std::vector<Tree> out;
  for (const Tree& t : enumerate_tw_trees(max_order))
    if (tree_is_tk(t)) out.push_back(t);
  return out;
}

Tree recolor_projected(const Tree& t) {
  std::vector<Tree> kids;
  kids.reserve(t.kids.size());
  for (const Tree& k : t.kids) kids.push_back(recolor_projected(k));
  bool fat = t.fat && !tree_is_chain(t);
  return make_tree(fat, std::move(kids));
}

Tree recolor_meagre(const Tree& t) {
  std::vector<Tree> kids;
  kids.reserve(t.kids.size());
  for (const Tree& k : t.kids) kids.push_back(recolor_meagre(k));
  return make_tree(false, std::move(kids));
}

}  // namespace epirk
