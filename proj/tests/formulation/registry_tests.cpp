#include "ocf/formulation.hpp"

#include "ocf/errors.hpp"

#include <doctest.h>

#include <set>
#include <vector>

using namespace ocf;

TEST_CASE("registry column counts for the reference configuration") {
    // 3 trees of depth 2 over 75 observations and 13 features:
    //   alpha 75, theta 225, z 900, d 9, l 12, a 117, xor 225 -> 1563 binaries
    //   b 9 -> 9 continuous columns
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 2;
    VariableRegistry reg(75, 13, cfg);
    CHECK(reg.column_count() == 1572);

    MilpModel model;
    reg.register_variables(model);
    CHECK(model.variable_count() == 1572);
    CHECK(model.binary_count() == 1563);
    CHECK(model.continuous_count() == 9);
}

TEST_CASE("registry accessors cover every column exactly once") {
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 2;
    const std::size_t n = 5, p = 3;
    VariableRegistry reg(n, p, cfg);
    const TreeTopology& topo = reg.topology();

    std::set<int> seen;
    for (std::size_t i = 0; i < n; ++i) seen.insert(reg.alpha(i));
    for (std::size_t i = 0; i < n; ++i)
        for (int r = 0; r < 3; ++r) seen.insert(reg.theta(i, r));
    for (std::size_t i = 0; i < n; ++i)
        for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t)
            for (int r = 0; r < 3; ++r) seen.insert(reg.z(i, t, r));
    for (NodeId t = 1; t < topo.first_leaf(); ++t)
        for (int r = 0; r < 3; ++r) seen.insert(reg.d(t, r));
    for (NodeId t = topo.first_leaf(); t <= topo.last_leaf(); ++t)
        for (int r = 0; r < 3; ++r) seen.insert(reg.l(t, r));
    for (NodeId t = 1; t < topo.first_leaf(); ++t)
        for (std::size_t q = 0; q < p; ++q)
            for (int r = 0; r < 3; ++r) seen.insert(reg.a(t, q, r));
    for (NodeId t = 1; t < topo.first_leaf(); ++t)
        for (int r = 0; r < 3; ++r) seen.insert(reg.b(t, r));
    for (std::size_t i = 0; i < n; ++i)
        for (int r = 0; r < 3; ++r) seen.insert(reg.flip(i, r));

    REQUIRE(static_cast<int>(seen.size()) == reg.column_count());
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == reg.column_count() - 1);
}

TEST_CASE("registry names and types are as documented") {
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 2;
    VariableRegistry reg(75, 13, cfg);
    MilpModel model;
    reg.register_variables(model);

    CHECK(model.variable(reg.alpha(0)).name == "alpha_1");
    CHECK(model.variable(reg.alpha(74)).name == "alpha_75");
    CHECK(model.variable(reg.theta(0, 1)).name == "theta_1_2");
    CHECK(model.variable(reg.z(0, 4, 0)).name == "z_1_4_1");
    CHECK(model.variable(reg.d(1, 0)).name == "d_1_1");
    CHECK(model.variable(reg.l(7, 2)).name == "l_7_3");
    CHECK(model.variable(reg.a(2, 3, 1)).name == "a_2_4_2");
    CHECK(model.variable(reg.b(3, 2)).name == "b_3_3");
    CHECK(model.variable(reg.flip(74, 2)).name == "xor_75_3");

    const Variable& threshold = model.variable(reg.b(1, 0));
    CHECK(threshold.type == VarType::Continuous);
    CHECK(threshold.lower == 0.0);
    CHECK(threshold.upper == 1.0);
    CHECK(model.variable(reg.alpha(0)).type == VarType::Binary);
}

TEST_CASE("registry without symmetry breaking has no disagreement columns") {
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 2;
    cfg.symmetry_breaking = false;
    VariableRegistry reg(75, 13, cfg);
    CHECK(reg.column_count() == 1572 - 225);
    CHECK_FALSE(reg.has_flip());
    CHECK_THROWS_AS(reg.flip(0, 0), InternalError);
}

TEST_CASE("registry rejects out-of-range queries") {
    OcfConfig cfg;
    cfg.tree_count = 3;
    cfg.depth = 2;
    VariableRegistry reg(5, 3, cfg);
    CHECK_THROWS_AS(reg.alpha(5), InternalError);
    CHECK_THROWS_AS(reg.theta(0, 3), InternalError);
    CHECK_THROWS_AS(reg.theta(0, -1), InternalError);
    CHECK_THROWS_AS(reg.z(0, 1, 0), InternalError);   // branch, not leaf
    CHECK_THROWS_AS(reg.d(4, 0), InternalError);      // leaf, not branch
    CHECK_THROWS_AS(reg.a(1, 3, 0), InternalError);   // feature out of range
    CHECK_THROWS_AS(reg.l(8, 0), InternalError);      // past the last leaf
}

TEST_CASE("registry validates its configuration") {
    OcfConfig cfg;
    cfg.tree_count = 2;  // even
    CHECK_THROWS_AS(VariableRegistry(5, 3, cfg), ConfigError);
    cfg.tree_count = 3;
    CHECK_THROWS_AS(VariableRegistry(0, 3, cfg), ConfigError);
    CHECK_THROWS_AS(VariableRegistry(5, 0, cfg), ConfigError);
}
