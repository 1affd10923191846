#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fgcn/graph.hpp"
#include "fgcn/karate.hpp"
#include "fgcn/smoothing.hpp"
#include "support/oracles.hpp"

using namespace fgcn;

TEST_CASE("oversmoothing basis") {
  SECTION("connected two-node path has the uniform vector") {
    const NormalizedAdjacency adj = normalize_adjacency({{0, 1, 1.0}}, 2);
    const SubspaceBasis sb = oversmoothing_basis(adj);
    REQUIRE(sb.num_components == 1);
    CHECK(sb.basis(0, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
    CHECK(sb.basis(1, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));
  }
  SECTION("two disjoint edges give two vectors with disjoint supports") {
    const NormalizedAdjacency adj = normalize_adjacency({{0, 1, 1.0}, {2, 3, 1.0}}, 4);
    const SubspaceBasis sb = oversmoothing_basis(adj);
    REQUIRE(sb.num_components == 2);
    for (std::size_t i = 0; i < 4; ++i) {
      const bool in_first = sb.basis(i, 0) != 0.0;
      const bool in_second = sb.basis(i, 1) != 0.0;
      CHECK(in_first != in_second);
    }
  }
  SECTION("karate: one component, entries proportional to sqrt(degree)") {
    const GraphBundle k = karate_club_bundle();
    const NormalizedAdjacency adj = normalize_adjacency(k.edges, k.num_nodes);
    const SubspaceBasis sb = oversmoothing_basis(adj);
    REQUIRE(sb.num_components == 1);
    for (std::size_t i = 0; i < 34; ++i)
      CHECK(sb.basis(i, 0) / sb.basis(0, 0) ==
            Catch::Approx(std::sqrt(adj.degrees[i] / adj.degrees[0])).margin(1e-12));
  }
  SECTION("basis is orthonormal to 1e-10") {
    const NormalizedAdjacency adj =
        normalize_adjacency({{0, 1, 1.0}, {1, 2, 0.5}, {3, 4, 2.0}}, 6);
    const SubspaceBasis sb = oversmoothing_basis(adj);
    const DenseMatrix gram = matmul_at_b(sb.basis, sb.basis);
    for (std::size_t i = 0; i < gram.rows; ++i)
      for (std::size_t j = 0; j < gram.cols; ++j)
        CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("subspace distance") {
  const GraphBundle k = karate_club_bundle();
  const NormalizedAdjacency adj = normalize_adjacency(k.edges, k.num_nodes);
  const SubspaceBasis sb = oversmoothing_basis(adj);

  SECTION("zero for anything inside M") {
    SeededRng rng(2);
    DenseMatrix row(1, 5);
    for (double& v : row.data) v = rng.normal();
    const DenseMatrix h = matmul(sb.basis, row);  // basis vector outer a row
    CHECK(subspace_distance(h, sb) < 1e-9);
  }
  SECTION("two-node path, [1, -1] is orthogonal to M") {
    const NormalizedAdjacency path = normalize_adjacency({{0, 1, 1.0}}, 2);
    const SubspaceBasis psb = oversmoothing_basis(path);
    DenseMatrix h(2, 1);
    h(0, 0) = 1.0;
    h(1, 0) = -1.0;
    CHECK(subspace_distance(h, psb) == Catch::Approx(std::sqrt(2.0)).margin(1e-12));
  }
  SECTION("matches the normal-equations oracle on random inputs") {
    SeededRng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      DenseMatrix h(34, 1 + rng.below(6));
      for (double& v : h.data) v = rng.normal();
      const double want = oracles::least_squares_projection_distance(h, sb.basis);
      CHECK(std::abs(subspace_distance(h, sb) - want) < 1e-10);
    }
  }
  SECTION("never expands the Frobenius norm") {
    SeededRng rng(4);
    DenseMatrix h(34, 3);
    for (double& v : h.data) v = rng.normal();
    CHECK(subspace_distance(h, sb) <= frobenius_norm(h) + 1e-12);
  }
  SECTION("dimension mismatch is rejected") {
    CHECK_THROWS_AS(subspace_distance(DenseMatrix(7, 2), sb), std::invalid_argument);
  }
}

TEST_CASE("singular value product") {
  SECTION("known diagonal weights multiply") {
    ModelParams p;
    p.specs = {{LayerKind::graph_conv, 2, 2, false, Activation::relu},
               {LayerKind::graph_conv, 2, 2, false, Activation::none}};
    DenseMatrix w0(2, 2), w1(2, 2);
    w0(0, 0) = 2.0;
    w0(1, 1) = 1.0;
    w1(0, 0) = 3.0;
    w1(1, 1) = 0.5;
    p.weights = {w0, w1};
    const SingularValueProduct sv = singular_value_product(p);
    CHECK(sv.per_layer[0] == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(sv.per_layer[1] == Catch::Approx(3.0).epsilon(1e-9));
    CHECK(sv.product == Catch::Approx(6.0).epsilon(1e-9));
  }
  SECTION("wide frozen layers sit near the Bai-Yin limit") {
    SeededRng rng(5);
    std::vector<LayerSpec> specs;
    specs.push_back({LayerKind::graph_conv, 64, 2048, false, Activation::relu});
    for (int l = 0; l < 14; ++l)
      specs.push_back({LayerKind::graph_conv, 2048, 2048, false, Activation::relu});
    specs.push_back({LayerKind::graph_conv, 2048, 7, true, Activation::none});
    const ModelParams p = build_model(specs, rng);
    const SingularValueProduct sv = singular_value_product(p, 1e-6);
    double frozen_product = 1.0;
    for (std::size_t l = 1; l < 15; ++l) {  // the square 2048x2048 frozen layers
      CHECK(sv.per_layer[l] > 1.85);
      CHECK(sv.per_layer[l] < 2.15);
      frozen_product *= sv.per_layer[l];
    }
    CHECK(frozen_product >= std::pow(1.85, 14));
  }
}

TEST_CASE("contraction check") {
  const GraphBundle k = karate_club_bundle();
  const NormalizedAdjacency adj = normalize_adjacency(k.edges, k.num_nodes);

  SECTION("lambda modes on karate match the frozen spectral constants") {
    CHECK(contraction_lambda(adj, LambdaMode::paper) ==
          Catch::Approx(0.103857950112066).margin(1e-9));
    CHECK(contraction_lambda(adj, LambdaMode::alt) ==
          Catch::Approx(0.896142049887934).margin(1e-9));
  }
  SECTION("input inside M keeps all distances at zero") {
    const SubspaceBasis sb = oversmoothing_basis(adj);
    SeededRng rng(6);
    DenseMatrix row(1, 4);
    for (double& v : row.data) v = rng.normal();
    const DenseMatrix x = matmul(sb.basis, row);
    ModelParams p;
    p.specs = {{LayerKind::graph_conv, 4, 4, false, Activation::none}};
    DenseMatrix eye(4, 4);
    for (int i = 0; i < 4; ++i) eye(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
    p.weights = {eye};
    const SmoothingReport r = contraction_check(p, adj, x, LambdaMode::alt);
    CHECK(r.rows[0].d_before < 1e-9);
    CHECK(r.rows[0].d_after < 1e-9);
    CHECK(r.rows[0].bound_holds);
  }
  SECTION("identity weights, no activation: alt-mode bound holds exactly") {
    // d_M(Â X) <= mu d_M(X) with mu the largest non-principal |eigenvalue|
    SeededRng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 10 + rng.below(41);  // up to 50 nodes
      std::vector<Edge> edges;
      for (std::uint32_t i = 1; i < n; ++i)
        edges.push_back({static_cast<std::uint32_t>(rng.below(i)), i, 0.2 + rng.uniform01()});
      const NormalizedAdjacency a = normalize_adjacency(edges, n);
      DenseMatrix x(n, 3);
      for (double& v : x.data) v = rng.normal();
      ModelParams p;
      p.specs = {{LayerKind::graph_conv, 3, 3, false, Activation::none}};
      DenseMatrix eye(3, 3);
      for (int i = 0; i < 3; ++i)
        eye(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
      p.weights = {eye};
      const SmoothingReport r = contraction_check(p, a, x, LambdaMode::alt);
      CHECK(r.rows[0].bound_holds);
    }
  }
  SECTION("frozen 8-layer model on karate reports per-mode violation counts") {
    SeededRng rng(8);
    std::vector<LayerSpec> specs;
    specs.push_back({LayerKind::graph_conv, 34, 32, false, Activation::relu});
    for (int l = 0; l < 6; ++l)
      specs.push_back({LayerKind::graph_conv, 32, 32, false, Activation::relu});
    specs.push_back({LayerKind::graph_conv, 32, 2, false, Activation::none});
    const ModelParams p = build_model(specs, rng);
    DenseMatrix x(34, 34);
    for (double& v : x.data) v = rng.normal();
    const SmoothingReport paper_mode = contraction_check(p, adj, x, LambdaMode::paper);
    const SmoothingReport alt_mode = contraction_check(p, adj, x, LambdaMode::alt);
    CHECK(paper_mode.rows.size() == 8);
    CHECK(alt_mode.rows.size() == 8);
    CHECK(paper_mode.violations() <= 8);
    CHECK(alt_mode.violations() <= paper_mode.violations());  // alt lambda is far looser here
  }
}

TEST_CASE("pairwise similarity") {
  SECTION("identical nonzero rows have cosine 1") {
    DenseMatrix h(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) h(i, j) = 1.0 + static_cast<double>(j);
    const auto [cos_mean, dist_mean] = pairwise_similarity(h);
    CHECK(cos_mean == Catch::Approx(1.0).margin(1e-12));
    CHECK(dist_mean == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("orthogonal rows have cosine 0") {
    DenseMatrix h(2, 2);
    h(0, 0) = 2.0;
    h(1, 1) = 3.0;
    const auto [cos_mean, dist_mean] = pairwise_similarity(h);
    CHECK(cos_mean == Catch::Approx(0.0).margin(1e-12));
    CHECK(dist_mean == Catch::Approx(std::sqrt(13.0)).margin(1e-12));
  }
  SECTION("zero rows contribute similarity 0") {
    DenseMatrix h(2, 2);
    h(1, 0) = 1.0;
    CHECK(pairwise_similarity(h).first == 0.0);
  }
  SECTION("matches the brute-force pair loop on 30 rows") {
    SeededRng rng(9);
    DenseMatrix h(30, 7);
    for (double& v : h.data) v = rng.normal();
    double cos_sum = 0.0, dist_sum = 0.0;
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = i + 1; j < 30; ++j) {
        double dot = 0.0, ni = 0.0, nj = 0.0, dist = 0.0;
        for (std::size_t c = 0; c < 7; ++c) {
          dot += h(i, c) * h(j, c);
          ni += h(i, c) * h(i, c);
          nj += h(j, c) * h(j, c);
          dist += (h(i, c) - h(j, c)) * (h(i, c) - h(j, c));
        }
        cos_sum += dot / std::sqrt(ni * nj);
        dist_sum += std::sqrt(dist);
      }
    const double pairs = 30.0 * 29.0 / 2.0;
    const auto [cos_mean, dist_mean] = pairwise_similarity(h);
    CHECK(cos_mean == Catch::Approx(cos_sum / pairs).margin(1e-12));
    CHECK(dist_mean == Catch::Approx(dist_sum / pairs).margin(1e-12));
  }
  SECTION("needs at least two rows") {
    CHECK_THROWS_AS(pairwise_similarity(DenseMatrix(1, 3)), std::invalid_argument);
  }
}
