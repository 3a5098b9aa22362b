#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ccadm/learners/config.hpp"
#include "ccadm/matrix.hpp"

namespace ccadm {

struct WindowedTable;

/// Algorithm-specific fitted state behind TrainedModel.
class ModelState {
 public:
  virtual ~ModelState() = default;
  virtual double predict_row(std::span<const double> x) const = 0;
  virtual void dump(std::ostream& out, const std::vector<std::string>& feature_names) const = 0;
};

/// An immutable fitted predictor. Copies share the fitted state, which is
/// safe because nothing mutates it after training.
class TrainedModel {
 public:
  TrainedModel(LearnerConfig config, std::shared_ptr<const ModelState> state, std::vector<std::string> feature_names,
               std::uint64_t train_fingerprint, std::uint64_t seed);

  const LearnerConfig& config() const noexcept { return config_; }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  std::uint64_t train_fingerprint() const noexcept { return fingerprint_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const ModelState& state() const noexcept { return *state_; }

  /// One prediction per row. Throws FeatureShapeError on a width mismatch.
  std::vector<double> predict(const Matrix& X) const;

  /// Versioned text dump: header, config, features, then the fitted state.
  void dump(std::ostream& out) const;

 private:
  LearnerConfig config_;
  std::shared_ptr<const ModelState> state_;
  std::vector<std::string> feature_names_;
  std::uint64_t fingerprint_;
  std::uint64_t seed_;
};

inline constexpr const char* kModelDumpVersion = "ccadm-model 1";

/// Fits `config` on the table. Deterministic in (config, data, seed); only DL
/// consumes the seed. Throws NonFiniteDataError on NaN/inf input.
TrainedModel train(const LearnerConfig& config, const WindowedTable& data, std::uint64_t seed);

inline std::vector<double> predict(const TrainedModel& model, const Matrix& X) { return model.predict(X); }

/// FNV-1a over the feature matrix and target bytes.
std::uint64_t fingerprint(const Matrix& X, std::span<const double> y);

}  // namespace ccadm
