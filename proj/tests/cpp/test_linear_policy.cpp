#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vpd/linear_policy.hpp"

using vpd::AdamState;
using vpd::ExperienceBuffer;
using vpd::LinearPolicy;
using vpd::Rng;
using vpd::TrainSettings;
using vpd::Vec;

namespace {

LinearPolicy make_policy(int d, int a, std::vector<double> w, Vec b) {
  LinearPolicy p;
  p.state_dim = d;
  p.action_dim = a;
  p.weights = std::move(w);
  p.bias = std::move(b);
  return p;
}

const std::vector<std::string> kXY{"x", "y"};

}  // namespace

TEST_CASE("predict applies the affine map row by row") {
  // one action depends only on y: 3.175 y - 1.000; the other: -4.127 y - 0.710
  LinearPolicy p = make_policy(2, 2, {0.0, 3.175, 0.0, -4.127}, {-1.000, -0.710});
  Vec out = p.predict(Vec{0.40, 0.20});
  CHECK(out[0] == doctest::Approx(-0.365).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(-1.5354).epsilon(1e-12));
}

TEST_CASE("predict validates the state dimension") {
  LinearPolicy p = make_policy(2, 1, {1.0, 1.0}, {0.0});
  CHECK_THROWS_AS(p.predict(Vec{1.0}), std::invalid_argument);
}

TEST_CASE("random initialization: small weights, zero bias, seeded") {
  Rng a(9), b(9);
  LinearPolicy p = vpd::init_random(3, 2, a);
  LinearPolicy q = vpd::init_random(3, 2, b);
  CHECK(p.weights == q.weights);
  CHECK(p.weights.size() == 6);
  CHECK(p.bias == Vec{0.0, 0.0});
  for (double w : p.weights) {
    CHECK(w >= -0.1);
    CHECK(w <= 0.1);
  }
}

TEST_CASE("param_distance is the max absolute parameter gap") {
  LinearPolicy p = make_policy(2, 1, {0.5, -0.2}, {0.1});
  LinearPolicy q = make_policy(2, 1, {0.5, 0.1}, {0.05});
  CHECK(vpd::param_distance(p, q) == doctest::Approx(0.3));
  CHECK(vpd::param_distance(p, p) == 0.0);
  CHECK(vpd::param_distance(q, p) == vpd::param_distance(p, q));

  LinearPolicy r = make_policy(2, 1, {0.5, -0.2}, {0.9});
  CHECK(vpd::param_distance(p, r) == doctest::Approx(0.8));  // bias counts too

  LinearPolicy other = make_policy(3, 1, {0.0, 0.0, 0.0}, {0.0});
  CHECK_THROWS_AS(vpd::param_distance(p, other), std::invalid_argument);
}

TEST_CASE("training on an empty buffer is a no-op") {
  LinearPolicy p = make_policy(1, 1, {0.4}, {0.2});
  const LinearPolicy before = p;
  AdamState opt;
  opt.reset(p);
  ExperienceBuffer buf;
  Rng rng(1);
  auto result = vpd::train_epoch(p, opt, buf, TrainSettings{}, rng);
  CHECK_FALSE(result.trained);
  CHECK(result.steps == 0);
  CHECK(p.weights == before.weights);
  CHECK(p.bias == before.bias);
}

TEST_CASE("full-batch training recovers an exact linear teacher") {
  // teacher: a = 2x - 1 on 50 evenly spread points
  ExperienceBuffer buf;
  for (int i = 0; i < 50; ++i) {
    const double x = static_cast<double>(i) / 49.0;
    buf.add({x}, {2.0 * x - 1.0});
  }
  auto fit = oracles::least_squares(buf.states, buf.actions);
  CHECK(fit.weights[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.bias[0] == doctest::Approx(-1.0).epsilon(1e-9));

  Rng init(3);
  LinearPolicy p = vpd::init_random(1, 1, init);
  AdamState opt;
  opt.reset(p);
  TrainSettings settings;  // batch_size 64 > 50 -> full batch
  Rng rng(4);
  double last_loss = 1.0;
  for (int epoch = 0; epoch < 5000; ++epoch) {
    auto res = vpd::train_epoch(p, opt, buf, settings, rng);
    REQUIRE(res.trained);
    last_loss = res.mean_loss;
  }
  CHECK(std::abs(p.weights[0] - fit.weights[0]) <= 1e-2);
  CHECK(std::abs(p.bias[0] - fit.bias[0]) <= 1e-2);
  CHECK(last_loss < 1e-4);
}

TEST_CASE("mini-batch training reduces the loss on noisy linear data") {
  Rng data_rng(15);
  ExperienceBuffer buf;
  for (int i = 0; i < 500; ++i) {
    const double x = data_rng.uniform01();
    const double y = data_rng.uniform01();
    buf.add({x, y}, {0.7 * x - 0.3 * y + 0.1, -0.5 * x + 0.2});
  }
  Rng init(8);
  LinearPolicy p = vpd::init_random(2, 2, init);
  AdamState opt;
  opt.reset(p);
  TrainSettings settings;  // batch_size 64 < 500 -> sampled mini-batches
  Rng rng(9);
  const double first = vpd::train_epoch(p, opt, buf, settings, rng).mean_loss;
  double last = first;
  for (int epoch = 0; epoch < 300; ++epoch)
    last = vpd::train_epoch(p, opt, buf, settings, rng).mean_loss;
  CHECK(last < first * 0.05);
}

TEST_CASE("step count follows buffer size and the cap") {
  LinearPolicy p = make_policy(1, 1, {0.0}, {0.0});
  AdamState opt;
  opt.reset(p);
  TrainSettings settings;
  settings.batch_size = 4;
  settings.max_steps = 32;
  ExperienceBuffer buf;
  for (int i = 0; i < 10; ++i)
    buf.add({static_cast<double>(i)}, {0.0});
  Rng rng(2);
  CHECK(vpd::train_epoch(p, opt, buf, settings, rng).steps == 3);  // ceil(10/4)

  for (int i = 0; i < 500; ++i)
    buf.add({static_cast<double>(i) * 0.01}, {0.0});
  CHECK(vpd::train_epoch(p, opt, buf, settings, rng).steps == 32);  // capped
}

TEST_CASE("training is deterministic for a fixed seed") {
  ExperienceBuffer buf;
  Rng data_rng(21);
  for (int i = 0; i < 100; ++i) {
    const double x = data_rng.uniform01();
    buf.add({x}, {0.5 * x});
  }
  auto run = [&buf]() {
    Rng init(1);
    LinearPolicy p = vpd::init_random(1, 1, init);
    AdamState opt;
    opt.reset(p);
    Rng rng(6);
    for (int e = 0; e < 50; ++e)
      vpd::train_epoch(p, opt, buf, TrainSettings{}, rng);
    return p;
  };
  LinearPolicy a = run(), b = run();
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("formula rendering: signs, trimming, and omitted zero terms") {
  LinearPolicy row1 =
      make_policy(2, 2, {-0.148, -0.021, -0.420, 0.231}, {-0.055, -1.095});
  CHECK(vpd::format_formula(row1, 0, kXY) == "-0.148x-0.021y-0.055");
  CHECK(vpd::format_formula(row1, 1, kXY) == "-0.420x+0.231y-1.095");

  // zero weights vanish; a positive leading term carries no sign
  LinearPolicy row3 =
      make_policy(2, 2, {0.0, 3.175, 0.0, -4.127}, {-1.000, -0.710});
  CHECK(vpd::format_formula(row3, 0, kXY) == "3.175y-1.000");
  CHECK(vpd::format_formula(row3, 1, kXY) == "-4.127y-0.710");

  // positive bias gets an explicit plus
  LinearPolicy rowp = make_policy(2, 1, {0.266, -0.424}, {0.349});
  CHECK(vpd::format_formula(rowp, 0, kXY) == "0.266x-0.424y+0.349");

  // four decimals survive when the last digit is significant
  LinearPolicy fine = make_policy(2, 1, {0.706, -0.6946}, {-0.463});
  CHECK(vpd::format_formula(fine, 0, kXY) == "0.706x-0.6946y-0.463");

  // at most one trailing zero is trimmed
  LinearPolicy round = make_policy(2, 1, {0.1, -1.0}, {0.25});
  CHECK(vpd::format_formula(round, 0, kXY) == "0.100x-1.000y+0.250");

  // an all-zero row still renders its bias
  LinearPolicy zero = make_policy(2, 1, {0.0, 0.0}, {0.0});
  CHECK(vpd::format_formula(zero, 0, kXY) == "+0.000");

  // values are rounded to four decimals before printing
  LinearPolicy noisy = make_policy(2, 1, {0.83572, -0.02049}, {1.0 / 3.0});
  CHECK(vpd::format_formula(noisy, 0, kXY) == "0.8357x-0.0205y+0.3333");
}
