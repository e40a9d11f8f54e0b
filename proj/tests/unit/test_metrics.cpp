#include "ctbr/errors.hpp"
#include "ctbr/metrics.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ctbr;

namespace {

TruthObject truth(ObjectKind kind, BBox region, int page = 0) {
  return {kind, page, region, "t", {}};
}

DetectedObject det(ObjectKind kind, BBox region, int page = 0) {
  return {kind, "t", region, page, "c", 1.0};
}

}  // namespace

TEST_CASE("perfect classification scores 1") {
  const LabelMap t{{"a", BlockLabel::kBodyText}, {"b", BlockLabel::kSupplementary},
                   {"c", BlockLabel::kAccessory}};
  const auto m = evaluate_classification(t, t);
  CHECK(m.macro_f1 == 1.0);
  CHECK(m.macro_precision == 1.0);
  CHECK(m.macro_recall == 1.0);
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("all BodyText on a balanced truth gives macro recall 1/3") {
  LabelMap t, p;
  for (int i = 0; i < 9; ++i) {
    const std::string id = "b" + std::to_string(i);
    t[id] = kAllLabels[static_cast<std::size_t>(i % 3)];
    p[id] = BlockLabel::kBodyText;
  }
  const auto m = evaluate_classification(p, t);
  CHECK(m.macro_recall == doctest::Approx(1.0 / 3.0));
  CHECK(m.per_class[0].recall == 1.0);
  CHECK(m.per_class[0].precision == doctest::Approx(1.0 / 3.0));
  CHECK(m.per_class[1].precision == 0.0);
  CHECK(m.per_class[1].f1 == 0.0);
}

TEST_CASE("different id sets are IdMismatchError") {
  CHECK_THROWS_AS(evaluate_classification({{"a", BlockLabel::kBodyText}},
                                          {{"b", BlockLabel::kBodyText}}),
                  IdMismatchError);
  CHECK_THROWS_AS(evaluate_classification({{"a", BlockLabel::kBodyText}}, {}), IdMismatchError);
}

TEST_CASE("macro-F1 is 1 exactly when the confusion matrix is diagonal") {
  testing::Gen g(3);
  for (int trial = 0; trial < 300; ++trial) {
    LabelMap t, p;
    const int n = g.integer(1, 12);
    for (int i = 0; i < n; ++i) {
      const std::string id = "b" + std::to_string(i);
      t[id] = kAllLabels[static_cast<std::size_t>(g.integer(0, 2))];
      p[id] = g.coin(0.7) ? t[id] : kAllLabels[static_cast<std::size_t>(g.integer(0, 2))];
    }
    const auto m = evaluate_classification(p, t);
    bool diagonal = true;
    for (std::size_t a = 0; a < kNumLabels; ++a)
      for (std::size_t b = 0; b < kNumLabels; ++b)
        if (a != b && m.confusion[a][b] != 0) diagonal = false;
    CHECK((m.macro_f1 == 1.0) == diagonal);
    for (const auto& c : m.per_class) {
      CHECK(c.precision >= 0.0);
      CHECK(c.precision <= 1.0);
      CHECK(c.recall >= 0.0);
      CHECK(c.recall <= 1.0);
      CHECK(c.f1 >= 0.0);
      CHECK(c.f1 <= 1.0);
    }
  }
}

TEST_CASE("detection metrics") {
  const std::vector<TruthObject> gold{truth(ObjectKind::kFigure, {0, 0, 100, 100}),
                                      truth(ObjectKind::kTable, {0, 200, 100, 300})};
  SUBCASE("perfect regions") {
    for (double t : {0.1, 0.5, 0.8, 1.0}) {
      const auto m = evaluate_detection({det(ObjectKind::kFigure, {0, 0, 100, 100}),
                                         det(ObjectKind::kTable, {0, 200, 100, 300})},
                                        gold, t);
      CHECK(m.precision == 1.0);
      CHECK(m.recall == 1.0);
      CHECK(m.mean_iou == 1.0);
    }
  }
  SUBCASE("no detections") {
    const auto m = evaluate_detection({}, gold, 0.8);
    CHECK(m.precision == 1.0);
    CHECK(m.precision_undefined);
    CHECK(m.recall == 0.0);
  }
  SUBCASE("IoU 0.5 misses a 0.8 threshold") {
    const auto m = evaluate_detection({det(ObjectKind::kFigure, {0, 0, 100, 200})}, gold, 0.8);
    CHECK(m.matched == 0);
    CHECK(m.precision == 0.0);
    CHECK(evaluate_detection({det(ObjectKind::kFigure, {0, 0, 100, 200})}, gold, 0.5).matched == 1);
  }
  SUBCASE("kind and page must agree") {
    CHECK(evaluate_detection({det(ObjectKind::kTable, {0, 0, 100, 100})}, gold, 0.5).matched == 0);
    CHECK(evaluate_detection({det(ObjectKind::kFigure, {0, 0, 100, 100}, 1)}, gold, 0.5).matched == 0);
  }
  SUBCASE("threshold must be in (0, 1]") {
    CHECK_THROWS_AS(evaluate_detection({}, gold, 0.0), InputError);
    CHECK_THROWS_AS(evaluate_detection({}, gold, 1.5), InputError);
  }
}

TEST_CASE("greedy matching is one-to-one and prefers higher IoU") {
  const std::vector<TruthObject> gold{truth(ObjectKind::kFigure, {0, 0, 100, 100})};
  const auto m = evaluate_detection({det(ObjectKind::kFigure, {0, 0, 100, 90}),
                                     det(ObjectKind::kFigure, {0, 0, 100, 100})},
                                    gold, 0.5);
  CHECK(m.matched == 1);
  CHECK(m.mean_iou == 1.0);
  CHECK(m.precision == 0.5);

  testing::Gen g(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TruthObject> t;
    std::vector<DetectedObject> d;
    for (int i = g.integer(0, 5); i > 0; --i) t.push_back(truth(ObjectKind::kFigure, g.box(200, 200)));
    for (int i = g.integer(0, 5); i > 0; --i) d.push_back(det(ObjectKind::kFigure, g.box(200, 200)));
    const auto r = evaluate_detection(d, t, g.real(0.05, 1.0));
    CHECK(r.matched <= std::min(t.size(), d.size()));
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
  }
}

TEST_CASE("merging detection counts") {
  DetectionMetrics a, b;
  a.predicted = 2; a.truth = 3; a.matched = 2; a.iou_sum = 1.8;
  b.predicted = 2; b.truth = 1; b.matched = 1; b.iou_sum = 0.9;
  a.merge(b);
  CHECK(a.precision == 0.75);
  CHECK(a.recall == 0.75);
  CHECK(a.mean_iou == doctest::Approx(0.9));
}
