// Two-colored rooted trees indexing the expansion of exponential W-type
// integrators. A "meagre" vertex stands for a derivative of the vector field
// f; a "fat" vertex stands for an application of the approximate-Jacobian
// operator A. Admissible trees have meagre leaves and singly-branched fat
// vertices (A is linear, so a fat vertex has exactly one child).
//
// Trees are kept canonical: children are recursively canonicalized and sorted
// under the total order (node count, color, child list), so equal trees
// compare equal structurally.
#pragma once

#include <compare>
#include <string>
#include <vector>

namespace epirk {

struct Tree {
  bool fat = false;
  std::vector<Tree> kids;

  friend std::strong_ordering operator<=>(const Tree& x, const Tree& y);
  friend bool operator==(const Tree& x, const Tree& y) { return (x <=> y) == 0; }
};

// Canonicalizing constructor; sorts the child list.
Tree make_tree(bool fat, std::vector<Tree> kids);
inline Tree leaf() { return Tree{false, {}}; }

int tree_order(const Tree& t);        // number of vertices
long long tree_sigma(const Tree& t);  // symmetry group size
long long tree_density(const Tree& t);  // gamma: order(t) * prod gamma(kids)

bool tree_has_fat(const Tree& t);
bool tree_is_chain(const Tree& t);  // every vertex has at most one child

// Renders "f", "A(f(f,f))" style structural names.
std::string tree_name(const Tree& t);

// All admissible two-colored trees with order <= max_order, in canonical
// order (ascending by order, then tree order).
std::vector<Tree> enumerate_tw_trees(int max_order);

// The subset on which projected-Jacobian (Krylov) methods have independent
// order conditions: trees where no chain-shaped subtree has a fat root.
std::vector<Tree> enumerate_tk_trees(int max_order);

// All-meagre trees (classical order-condition index set).
std::vector<Tree> enumerate_meagre_trees(int max_order);

// Recolors meagre every fat vertex whose subtree is a chain; maps an
// admissible tree onto its projected-Jacobian representative.
Tree recolor_projected(const Tree& t);

// Recolors every fat vertex meagre (exact-Jacobian identification A = J).
Tree recolor_meagre(const Tree& t);

inline bool tree_is_tk(const Tree& t) { return recolor_projected(t) == t; }

}  // namespace epirk
