#pragma once

#include <span>
#include <vector>

#include "ffhsi/dataset/cube.hpp"
#include "ffhsi/dataset/encoding.hpp"
#include "ffhsi/tensor/random.hpp"
#include "ffhsi/tensor/types.hpp"

namespace ffhsi {

/// Labeled spectra gathered from a cube: one pixel per column.
struct SampleSet {
  MatrixXd spectra;
  std::vector<int> labels;
  int classes = 0;

  Index size() const { return spectra.cols(); }
  Index bands() const { return spectra.rows(); }

  /// Subset by column positions, in the given order.
  SampleSet select(std::span<const std::size_t> columns) const;
};

SampleSet gather_samples(const HsiCube& cube, std::span<const std::size_t> pixels);

enum class Polarity { positive, negative };

/// Spectrum with a label code prepended: code at [0, code_len), spectrum after.
struct EmbeddedSample {
  VectorXd vector;
  int true_label = 0;
  int embedded_label = 0;
  Polarity polarity = Polarity::positive;
};

EmbeddedSample make_positive(const Eigen::Ref<const VectorXd>& spectrum, int true_label,
                             const LabelEncoding& enc);

/// Embeds a label drawn uniformly from the classes other than `true_label`.
EmbeddedSample make_negative(const Eigen::Ref<const VectorXd>& spectrum, int true_label,
                             const LabelEncoding& enc, Rng& rng);

VectorXd neutral_embed(const Eigen::Ref<const VectorXd>& spectrum, const LabelEncoding& enc);

/// Uniform draw from [1, N] excluding `true_label`.
int draw_wrong_label(int true_label, int classes, Rng& rng);

/// Batched embedding: column s of the result is code(labels[s]) ++ spectra.col(s).
MatrixXd embed_batch(const MatrixXd& spectra, std::span<const int> labels,
                     const LabelEncoding& enc);

/// Batched neutral embedding.
MatrixXd neutral_batch(const MatrixXd& spectra, const LabelEncoding& enc);

}  // namespace ffhsi
