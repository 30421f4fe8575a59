#include <cmath>
#include <random>

#include "doctest.h"
#include "vinenav/kinematics.hpp"

using namespace vinenav;

namespace {

std::vector<Vec2> random_chain(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> len(0.05, 2.0), ang(-M_PI, M_PI);
    int n = 2 + int(rng() % 7);
    std::vector<Vec2> pts{{0.0, 0.0}};
    double heading = ang(rng);
    for (int i = 1; i < n; ++i) {
        if (i > 1) heading += ang(rng) * 0.99;  // keep bends inside (-pi, pi)
        pts.push_back(pts.back() + Vec2::from_angle(heading) * len(rng));
    }
    return pts;
}

PivotPoint make_pivot(Vec2 pos, PivotKind kind, Handedness h, bool touching = false,
                      int obstacle = -1) {
    PivotPoint p;
    p.position = pos;
    p.kind = kind;
    p.handedness = h;
    p.touching = touching;
    p.obstacle = obstacle;
    return p;
}

}  // namespace

TEST_CASE("joint conversions on pinned cases") {
    JointState straight{{0.0}, {1.0}};
    auto pts = to_cartesian(straight);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] == Vec2{0.0, 0.0});
    CHECK(dist(pts[1], {1.0, 0.0}) < 1e-12);

    JointState elbow{{M_PI / 2, -M_PI / 2}, {1.0, 1.0}};
    pts = to_cartesian(elbow);
    REQUIRE(pts.size() == 3);
    CHECK(dist(pts[1], {0.0, 1.0}) < 1e-12);
    CHECK(dist(pts[2], {1.0, 1.0}) < 1e-12);

    JointState js = to_joint({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
    REQUIRE(js.angles.size() == 2);
    CHECK(js.angles[0] == doctest::Approx(0.0));
    CHECK(js.angles[1] == doctest::Approx(M_PI / 2));
    CHECK(js.lengths[0] == doctest::Approx(1.0));
    CHECK(js.lengths[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(to_joint({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(to_cartesian(JointState{{0.0}, {0.0}}), std::invalid_argument);
}

TEST_CASE("joint conversion round-trips on random chains") {
    std::mt19937_64 rng(314159);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_chain(rng);
        auto back = to_cartesian(to_joint(pts), pts[0]);
        REQUIRE(back.size() == pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) CHECK(dist(back[i], pts[i]) < 1e-9);
    }
}

TEST_CASE("turn_direction matches the cross-product sign") {
    double c = std::sqrt(0.5);
    CHECK(turn_direction({1.0, 0.0}, {c, c}) == RotationSense::left);
    CHECK(turn_direction({1.0, 0.0}, {c, -c}) == RotationSense::right);
    // tangent orientation is normalized first, so the reversed tangent agrees
    CHECK(turn_direction({1.0, 0.0}, {-c, -c}) == RotationSense::left);
    CHECK_THROWS_AS(turn_direction({1.0, 0.0}, {0.0, 1.0}), std::domain_error);

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    for (int i = 0; i < 500; ++i) {
        Vec2 e = Vec2::from_angle(ang(rng)), t = Vec2::from_angle(ang(rng));
        if (std::abs(e.dot(t)) < 1e-2) continue;
        Vec2 tt = e.dot(t) > 0.0 ? t : -t;
        double cz = e.x * tt.y - e.y * tt.x;  // independent cross formula
        CHECK(turn_direction(e, t) == (cz > 0.0 ? RotationSense::left : RotationSense::right));
    }
}

TEST_CASE("contact_slide_rate closed-form cases") {
    double c = std::sqrt(0.5);
    auto r = contact_slide_rate({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {c, c});
    CHECK(r.theta_dot == doctest::Approx(1.0));
    CHECK(r.v == doctest::Approx(std::sqrt(2.0)));

    r = contact_slide_rate({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0});
    CHECK(r.theta_dot == doctest::Approx(0.0));
    CHECK(r.v == doctest::Approx(1.0));

    CHECK_THROWS_AS(contact_slide_rate({0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}),
                    std::domain_error);

    // theta_dot sign matches turn_direction over random non-degenerate setups
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(0.2, 3.0);
    for (int i = 0; i < 200; ++i) {
        Vec2 pivot{0.0, 0.0};
        Vec2 tip = Vec2::from_angle(ang(rng)) * rad(rng);
        Vec2 e = Vec2::from_angle(ang(rng));
        Vec2 t = Vec2::from_angle(ang(rng));
        if (std::abs(e.dot(t)) < 1e-2) continue;
        if (std::abs(tip.normalized().cross(t)) < 1e-2) continue;  // near-singular arm
        auto rates = contact_slide_rate(pivot, tip, e, t);
        // residual of the velocity constraint, tangent taken as given (v is signed)
        Vec2 arm = tip - pivot;
        Vec2 vel = e + rates.theta_dot * arm.perp();
        CHECK(dist(vel, t * rates.v) < 1e-9);
        // rotation sense matches the heading/tangent rule when the pivot sits
        // behind the tip along the slide direction (the regime slides occur in)
        Vec2 tt = e.dot(t) > 0.0 ? t : -t;
        if (arm.dot(tt) < 1e-2 || std::abs(rates.theta_dot) < 1e-9) continue;
        CHECK((rates.theta_dot > 0.0 ? RotationSense::left : RotationSense::right) ==
              turn_direction(e, t));
    }
}

TEST_CASE("select_pivot handedness filter and policy split") {
    MapModel empty;
    empty.bounds = {{-10.0, -10.0}, {10.0, 10.0}};
    empty.start = {0.0, 0.0};
    empty.goal = {5.0, 5.0};

    RobotState s;
    s.pivots.push_back(make_pivot({0.0, 0.0}, PivotKind::base, Handedness::both));
    s.pivots.push_back(make_pivot({1.0, 0.0}, PivotKind::contact, Handedness::left));
    s.pivots.push_back(make_pivot({2.0, 0.5}, PivotKind::contact, Handedness::left));
    s.tip = {3.0, 1.0};
    s.heading = (s.tip - s.pivots[2].position).normalized();

    CHECK(select_pivot(s, RotationSense::left, empty, PivotPolicy::most_proximal_unsupported) == 1);
    CHECK(select_pivot(s, RotationSense::left, empty, PivotPolicy::most_distal_unsupported) == 2);
    // no left-admitting candidate -> base fallback
    CHECK(select_pivot(s, RotationSense::right, empty) == 0);

    // straight robot: base is the only pivot
    RobotState straight;
    straight.pivots.push_back(make_pivot({0.0, 0.0}, PivotKind::base, Handedness::both));
    straight.tip = {2.0, 0.0};
    straight.heading = {1.0, 0.0};
    CHECK(select_pivot(straight, RotationSense::left, empty) == 0);
    CHECK(select_pivot(straight, RotationSense::right, empty) == 0);
}

TEST_CASE("select_pivot skips mismatched designed turn") {
    MapModel empty;
    empty.bounds = {{-10.0, -10.0}, {10.0, 10.0}};
    empty.start = {0.0, 0.0};
    empty.goal = {5.0, 5.0};

    // designed right turn most distal, wall turning the robot left: selection
    // shifts one proximal to the n-2 pivot under both policies
    RobotState s;
    s.pivots.push_back(make_pivot({0.0, 0.0}, PivotKind::base, Handedness::both));
    s.pivots.push_back(make_pivot({1.0, 0.0}, PivotKind::contact, Handedness::right));
    s.pivots.push_back(make_pivot({2.0, 0.5}, PivotKind::contact, Handedness::left));
    auto turn = make_pivot({3.0, 0.2}, PivotKind::designed_turn, Handedness::right);
    turn.design_index = 1;
    s.pivots.push_back(turn);
    s.tip = {4.0, 0.8};
    s.heading = (s.tip - s.pivots[3].position).normalized();

    CHECK(select_pivot(s, RotationSense::left, empty, PivotPolicy::most_proximal_unsupported) == 2);
    CHECK(select_pivot(s, RotationSense::left, empty, PivotPolicy::most_distal_unsupported) == 2);
}

TEST_CASE("select_pivot treats braced contacts as supported") {
    MapModel m;
    m.bounds = {{-10.0, -10.0}, {10.0, 10.0}};
    m.obstacles.push_back(Polygon{{{1.0, -1.0}, {2.0, -1.0}, {2.0, 1.0}, {1.0, 1.0}}});
    m.obstacles.push_back(Polygon{{{4.0, -3.0}, {5.0, -3.0}, {5.0, -1.5}, {4.0, -1.5}}});
    m.start = {0.0, 0.0};
    m.goal = {-5.0, -5.0};
    m.validate();

    RobotState s;
    s.pivots.push_back(make_pivot({0.0, 0.0}, PivotKind::base, Handedness::both));
    // resting on the bottom face of the first block: counter-clockwise
    // rotation about the base presses it upward into the obstacle
    s.pivots.push_back(make_pivot({1.5, -1.0}, PivotKind::contact, Handedness::left, true, 0));
    // resting on the left face of the second block: rotation about the pivot
    // above presses it rightward into the obstacle
    s.pivots.push_back(make_pivot({4.0, -2.0}, PivotKind::contact, Handedness::left, true, 1));
    s.tip = {3.8, -3.5};
    s.heading = (s.tip - s.pivots[2].position).normalized();

    CHECK(select_pivot(s, RotationSense::left, m, PivotPolicy::most_proximal_unsupported) == 2);
    CHECK(select_pivot(s, RotationSense::left, m, PivotPolicy::most_distal_unsupported) == 2);
}

TEST_CASE("robot state helpers") {
    RobotState s;
    s.pivots.push_back(make_pivot({0.0, 0.0}, PivotKind::base, Handedness::both));
    s.pivots.push_back(make_pivot({1.0, 0.0}, PivotKind::designed_turn, Handedness::right));
    s.tip = {1.0, -2.0};
    s.heading = {0.0, -1.0};
    auto bb = s.backbone();
    REQUIRE(bb.size() == 3);
    CHECK(bb[2] == s.tip);
    CHECK(s.length() == doctest::Approx(3.0));
    CHECK(s.joint_angle(1) == doctest::Approx(-M_PI / 2));

    RobotDesign bad{{{1.0, 0.0}, {0.0, 0.5}}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    RobotDesign ok{{{1.0, 0.0}, {0.5, 0.5}}};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.total_length() == doctest::Approx(1.5));
    CHECK(ok.turn_count() == 1);
}
