// Fullerene cages built from rings around a symmetry axis.
//
// The c60/c70/c80 cages are (5,0) zigzag tubes: a pentagon cap, then R
// rings of 10 atoms whose in-ring bonds alternate between pairs (2i+1, 2i+2)
// and (2i, 2i+1), then a mirrored cap. R = 4, 5, 6 give the isolated-pentagon
// C60 (Ih), C70 (D5h) and the tubular C80 (D5d). C24 (D6d) is two hexagon caps
// around a zigzag 12-ring.

#include <string>
#include <vector>

#include "eegl/datasets.h"
#include "eegl/error.h"

namespace eegl {
namespace {

Graph zigzag_tube(int rings) {
  const int n = 20 + 10 * rings;
  auto ring = [](int k, int j) { return 10 + 10 * k + ((j % 10) + 10) % 10; };
  const int bottom_u = 10 + 10 * rings, bottom_t = bottom_u + 5;
  std::vector<Edge> edges;
  auto add = [&](int a, int b) { edges.push_back(make_edge(a, b)); };
  for (int i = 0; i < 5; ++i) {
    add(i, (i + 1) % 5);
    add(i, 5 + i);
    add(5 + i, ring(0, 2 * i));
    add(5 + i, ring(0, 2 * i + 1));
    add(bottom_t + i, bottom_t + (i + 1) % 5);
    add(bottom_t + i, bottom_u + i);
  }
  for (int k = 0; k < rings; ++k) {
    for (int i = 0; i < 5; ++i) {
      if (k % 2 == 0) add(ring(k, 2 * i + 1), ring(k, 2 * i + 2));
      else add(ring(k, 2 * i), ring(k, 2 * i + 1));
    }
    if (k + 1 < rings)
      for (int j = 0; j < 10; ++j) add(ring(k, j), ring(k + 1, j));
  }
  const int last = rings - 1;
  const int offset = last % 2 == 0 ? 0 : 1;
  for (int i = 0; i < 5; ++i) {
    add(bottom_u + i, ring(last, 2 * i + offset));
    add(bottom_u + i, ring(last, 2 * i + 1 + offset));
  }
  return build_graph(n, edges);
}

Graph c24_d6d() {
  std::vector<Edge> edges;
  auto add = [&](int a, int b) { edges.push_back(make_edge(a, b)); };
  for (int i = 0; i < 6; ++i) {
    add(i, (i + 1) % 6);
    add(18 + i, 18 + (i + 1) % 6);
    add(i, 6 + 2 * i);
    add(18 + i, 6 + 2 * i + 1);
  }
  for (int j = 0; j < 12; ++j) add(6 + j, 6 + (j + 1) % 12);
  return build_graph(24, edges);
}

}  // namespace

std::vector<std::string> fullerene_names() { return {"c24_d6d", "c60_ih", "c70_d5h", "c80_d5d"}; }

Graph build_fullerene(const std::string& name) {
  if (name == "c24_d6d") return c24_d6d();
  if (name == "c60_ih") return zigzag_tube(4);
  if (name == "c70_d5h") return zigzag_tube(5);
  if (name == "c80_d5d") return zigzag_tube(6);
  throw Error(ErrorCode::kBadParams, "unknown fullerene: " + name);
}

}  // namespace eegl
