#pragma once

#include <memory>
#include <string>

#include "vpd/common.hpp"

namespace vpd {

/// Black-box teacher: a deterministic state -> action function.
class Teacher {
 public:
  virtual ~Teacher() = default;
  virtual int state_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual Vec act(const Vec& state) const = 0;
};

enum class Activation { kRelu, kTanh, kIdentity };

struct MlpLayer {
  std::vector<double> weights;  // row-major, rows = output units
  Vec bias;
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::kIdentity;
};

/// Feed-forward network teacher loaded from a weight file. When
/// squash_output is set the final output passes through tanh, which maps to
/// the [-1, 1] action range of the supported environments.
class MlpTeacher final : public Teacher {
 public:
  MlpTeacher(std::vector<MlpLayer> layers, bool squash_output, int state_dim,
             int action_dim);

  int state_dim() const override { return state_dim_; }
  int action_dim() const override { return action_dim_; }
  Vec act(const Vec& state) const override;

  const std::vector<MlpLayer>& layers() const { return layers_; }
  bool squash_output() const { return squash_output_; }

  static MlpTeacher load(const std::string& path);
  static MlpTeacher from_json_text(const std::string& text);
  void save(const std::string& path) const;
  std::string to_json_text() const;

 private:
  std::vector<MlpLayer> layers_;
  bool squash_output_;
  int state_dim_;
  int action_dim_;
};

/// SimpleGoal oracle: unit attraction toward the goal center plus a
/// repulsive push away from the pitfall center inside a cutoff radius.
class SimpleGoalPotentialField final : public Teacher {
 public:
  explicit SimpleGoalPotentialField(double repulse_gain = 0.15,
                                    double cutoff_radius = 0.35)
      : gain_(repulse_gain), cutoff_(cutoff_radius) {}

  int state_dim() const override { return 2; }
  int action_dim() const override { return 2; }
  Vec act(const Vec& state) const override;

 private:
  double gain_;
  double cutoff_;
};

/// Mountain-car oracle: full force along the current velocity
/// (F = +1 when v >= 0, else -1), the classic energy-pumping strategy.
class MountainCarEnergy final : public Teacher {
 public:
  int state_dim() const override { return 2; }
  int action_dim() const override { return 1; }
  Vec act(const Vec& state) const override {
    return {state[1] >= 0.0 ? 1.0 : -1.0};
  }
};

/// Builds a teacher from a source string: "oracle:<tag>" or "file:<path>".
std::unique_ptr<Teacher> make_teacher(const std::string& source);

}  // namespace vpd
