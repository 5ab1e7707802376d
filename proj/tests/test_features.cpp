#include "fer/features.hpp"
#include "fer/pipeline.hpp"
#include "fer/synthetic.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fer;

namespace {

Segment seg(int x, int y, int w, int h, long area = 0)
{
    return {{x, y, w, h}, area ? area : static_cast<long>(w) * h, Region::unset};
}

ExtractParams permissive()
{
    ExtractParams p;
    p.upper_left_margins = p.upper_right_margins = p.lower_margins = NormRect{0, 1, 0, 1};
    return p;
}

std::vector<std::tuple<int, int, int, int, long>> canon(const std::vector<Segment>& v)
{
    std::vector<std::tuple<int, int, int, int, long>> out;
    for (const auto& s : v) out.emplace_back(s.box.x, s.box.y, s.box.w, s.box.h, s.area);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("featureextract") {

TEST_CASE("label_components")
{
    CHECK(label_components(BinaryMask(6, 6)).empty());

    BinaryMask two(8, 4);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            two.set(x, y, true);
            two.set(x + 5, y + 2, true);
        }
    const auto s = label_components(two);
    REQUIRE(s.size() == 2);
    CHECK(s[0].box == BBox{0, 0, 2, 2});
    CHECK(s[1].box == BBox{5, 2, 2, 2});
    CHECK(s[0].area == 4);
    CHECK(s[1].area == 4);
    CHECK(s[0].region == Region::unset);
}

TEST_CASE("label_components matches flood fill on 100 random masks")
{
    std::mt19937 rng(90);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = oracle::random_mask(rng, 10 + trial % 13, 9 + trial % 7, 0.15 + 0.005 * trial);
        std::vector<std::tuple<long, int, int, int, int>> got;
        for (const auto& s : label_components(m)) {
            CHECK(s.area <= s.box.area());
            CHECK(s.area >= 1);
            got.emplace_back(s.area, s.box.x, s.box.y, s.box.w, s.box.h);
        }
        std::sort(got.begin(), got.end());
        CHECK(got == oracle::component_boxes(m));
    }
}

TEST_CASE("remove_small")
{
    const std::vector<Segment> v{seg(0, 0, 3, 1), seg(5, 5, 4, 3), seg(9, 0, 8, 5)};
    CHECK(remove_small(v, 1) == v);
    CHECK(remove_small(v, 41).empty());
    CHECK(remove_small(v, 10) == std::vector<Segment>{v[1], v[2]});
    CHECK_THROWS_AS(remove_small(v, 0), InvalidArgument);
}

TEST_CASE("partition_regions")
{
    const int w = 100, h = 80;
    const auto p = permissive();

    auto split = partition_regions({seg(20, 15, 10, 10)}, w, h, p);
    REQUIRE(split.upper_left.size() == 1);
    CHECK(split.upper_left[0].region == Region::upper_left);

    // Centre exactly on the split point goes lower and right.
    split = partition_regions({seg(45, 35, 10, 10)}, w, h, p);
    CHECK(split.lower.size() == 1);
    split = partition_regions({seg(45, 10, 10, 10)}, w, h, p);
    CHECK(split.upper_right.size() == 1);

    // Inside the quadrant but outside the default upper-left rectangle.
    split = partition_regions({seg(0, 0, 10, 10)}, w, h, ExtractParams{});
    CHECK(split.upper_left.empty());
    CHECK(split.upper_right.empty());
    CHECK(split.lower.empty());

    split = partition_regions({seg(10, 15, 30, 10), seg(60, 15, 30, 10), seg(30, 45, 40, 20)}, w, h, ExtractParams{});
    CHECK(split.upper_left.size() == 1);
    CHECK(split.upper_right.size() == 1);
    CHECK(split.lower.size() == 1);
}

TEST_CASE("merge_to_two rules")
{
    const std::vector<Segment> two{seg(0, 0, 3, 3), seg(10, 10, 3, 3)};
    CHECK(merge_to_two(two) == two);

    const auto r = merge_to_two({seg(0, 0, 4, 2), seg(2, 5, 4, 3), seg(20, 0, 3, 3)});
    REQUIRE(r.size() == 2);
    CHECK(r[0].box == BBox{0, 0, 6, 8});
    CHECK(r[0].area == 20);
    CHECK(r[1].box == BBox{20, 0, 3, 3});

    // One overlap chain over everything would leave a single box, so the nearest pair merges instead.
    const auto chain = merge_to_two({seg(0, 0, 10, 2), seg(5, 10, 10, 2), seg(12, 40, 10, 2)});
    REQUIRE(chain.size() == 2);
    CHECK(canon(chain) == canon(oracle::merge_to_two({seg(0, 0, 10, 2), seg(5, 10, 10, 2), seg(12, 40, 10, 2)})));
    CHECK(std::any_of(chain.begin(), chain.end(), [](const Segment& s) { return s.box == BBox{0, 0, 15, 12}; }));

    // Y-axis overlap is available as an alternative reading.
    const auto y = merge_to_two({seg(0, 0, 2, 4), seg(5, 2, 2, 4), seg(0, 20, 2, 2)}, MergeAxis::y);
    CHECK(canon(y) == canon({seg(0, 0, 7, 6, 16), seg(0, 20, 2, 2)}));
}

TEST_CASE("merge_to_two matches the brute-force oracle")
{
    std::mt19937 rng(314);
    std::uniform_int_distribution<int> pos(0, 60), ext(1, 12);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + trial % 6;
        std::vector<Segment> v;
        long total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            v.push_back(seg(pos(rng), pos(rng), ext(rng), ext(rng)));
            total += v.back().area;
        }
        const auto axis = trial % 2 ? MergeAxis::y : MergeAxis::x;
        const auto got = merge_to_two(v, axis);
        CHECK(got.size() == 2);
        CHECK(canon(got) == canon(oracle::merge_to_two(v, axis == MergeAxis::x)));
        long sum = 0;
        for (const auto& s : got) sum += s.area;
        CHECK(sum == total);
    }
    CHECK(merge_to_two({}).empty());
    CHECK(merge_to_two({seg(1, 1, 1, 1)}).size() == 1);
}

TEST_CASE("assign_features")
{
    const std::vector<Segment> ul{seg(10, 50, 20, 10), seg(10, 25, 20, 10)};
    const std::vector<Segment> ur{seg(60, 25, 20, 10), seg(60, 50, 20, 10)};
    const std::vector<Segment> lo{seg(40, 170, 30, 20), seg(45, 130, 10, 20)};
    const auto f = assign_features(ul, ur, lo, 100, 200);
    CHECK(f.left_eyebrow.center_y() == 30);
    CHECK(f.left_eye.center_y() == 55);
    CHECK(f.right_eyebrow.y == 25);
    CHECK(f.nose.center_y() == 140);
    CHECK(f.mouth.center_y() == 180);
    CHECK(f.crop_width == 100);

    // Tie on centre-y: the flatter box is the eyebrow.
    const auto t = assign_features({seg(0, 10, 10, 12), seg(20, 14, 10, 4)}, ur, lo, 100, 200);
    CHECK(t.left_eyebrow.h == 4);
    CHECK(t.left_eye.h == 12);

    try {
        assign_features(ul, {seg(1, 1, 1, 1)}, lo, 100, 200);
        FAIL("expected a feature count error");
    } catch (const FeatureCountError& e) {
        CHECK(e.kind() == "feature count");
        CHECK(e.region() == "upper_right");
        CHECK(e.count() == 1);
    }
    CHECK_THROWS_AS(assign_features(ul, ur, {}, 100, 200), FeatureCountError);
}

TEST_CASE("feature_vector geometry")
{
    FacialFeatures f;
    f.left_eyebrow = {20, 40, 30, 8};
    f.left_eye = {21, 60, 28, 12};
    f.right_eyebrow = {60, 40, 30, 8};
    f.right_eye = {61, 62, 28, 12};
    f.nose = {48, 90, 14, 20};
    f.mouth = {40, 130, 30, 10};
    f.crop_width = 120;
    f.crop_height = 160;
    const double diag = 200.0;
    const auto v = feature_vector(f);
    CHECK(v[0] == doctest::Approx(8 / diag));
    CHECK(v[1] == doctest::Approx(30 / diag));
    CHECK(v[2] == doctest::Approx(12 / diag));
    CHECK(v[3] == doctest::Approx(28 / diag));
    CHECK(v[12] == doctest::Approx(22 / diag));
    CHECK(v[13] == doctest::Approx(24 / diag));
    CHECK(v[14] == doctest::Approx(std::hypot(0, 35) / diag));
    for (double x : v.values) CHECK(x > 0);

    const auto raw = feature_vector(f, false);
    CHECK(raw[0] == 8);
    CHECK(raw[11] == 30);
    CHECK(raw[12] == doctest::Approx(22));

    FacialFeatures g = f;
    for (BBox* b : {&g.left_eyebrow, &g.left_eye, &g.right_eyebrow, &g.right_eye, &g.nose, &g.mouth})
        *b = {b->x * 2, b->y * 2, b->w * 2, b->h * 2};
    g.crop_width *= 2;
    g.crop_height *= 2;
    const auto v2 = feature_vector(g);
    for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(v2[i] == doctest::Approx(v[i]).epsilon(1e-12));
}

TEST_CASE("feature names follow the vector order")
{
    const auto& n = feature_names();
    CHECK(n[0] == "h1");
    CHECK(n[1] == "w1");
    CHECK(n[8] == "hn");
    CHECK(n[11] == "wm");
    CHECK(n[14] == "d3");
}

TEST_CASE("parameter validation")
{
    ExtractParams p;
    CHECK_NOTHROW(p.validate());
    p.min_area = 0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.lower_margins = {0.5, 0.2, 0, 1};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.upper_left_margins = {0, 1.2, 0, 1};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    CHECK(p.resolve_min_area(200, 100) == 10);
    p.min_area = 7;
    CHECK(p.resolve_min_area(200, 100) == 7);
}

TEST_CASE("blank crop has too few features")
{
    CHECK_THROWS_AS(extract(GrayImage(120, 140, 160)), FeatureCountError);
}

TEST_CASE("synthetic faces yield six boxes near the painted features")
{
    for (int e = 0; e < static_cast<int>(kExpressionCount); ++e) {
        const auto face = generate_face(static_cast<Expression>(e), 500 + e);
        const auto a = analyze_face(face.image);
        const auto boxes = a.result.features.boxes();
        for (std::size_t k = 0; k < 6; ++k) {
            const BBox mapped = crop_box_to_image(boxes[k], a.face, a.crop);
            CHECK(iou(mapped, face.features[k]) >= 0.7);
            CHECK(a.crop.contains(boxes[k]));
        }
        CHECK(boxes[0].center_y() < boxes[1].center_y());
        CHECK(boxes[2].center_y() < boxes[3].center_y());
        CHECK(boxes[4].center_y() < boxes[5].center_y());
        CHECK(analyze_face(face.image).result.vector == a.result.vector);
    }
}

TEST_CASE("translated face keeps its distances")
{
    const auto base = generate_face(Expression::happy, 77);
    const auto moved = generate_face(Expression::happy, 77, {}, {5, 5});
    const auto a = analyze_face(base.image);
    const auto b = analyze_face(moved.image);
    const double unit = 1.0 / std::hypot(a.crop.width(), a.crop.height());
    for (std::size_t i = 12; i < 15; ++i) CHECK(std::abs(a.result.vector[i] - b.result.vector[i]) <= unit);
}

}

TEST_SUITE("featureextract_scale") {

TEST_CASE("feature vector is stable under a further 2x enlargement")
{
    for (int e = 0; e < static_cast<int>(kExpressionCount); ++e) {
        const auto face = generate_face(static_cast<Expression>(e), 900 + e);
        const auto a = analyze_face(face.image);
        const auto bigger = resize_bilinear(a.crop, a.crop.width() * 2, a.crop.height() * 2);
        const auto b = extract(bigger);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            INFO("expression " << e << " entry " << feature_names()[i]);
            CHECK(std::abs(b.vector[i] - a.result.vector[i]) < 0.05 * a.result.vector[i]);
        }
    }
}

}
