#include "ffhsi/dataset/samples.hpp"

namespace ffhsi {

SampleSet SampleSet::select(std::span<const std::size_t> columns) const {
  SampleSet out;
  out.classes = classes;
  out.spectra.resize(spectra.rows(), static_cast<Index>(columns.size()));
  out.labels.reserve(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out.spectra.col(static_cast<Index>(i)) = spectra.col(static_cast<Index>(columns[i]));
    out.labels.push_back(labels[columns[i]]);
  }
  return out;
}

SampleSet gather_samples(const HsiCube& cube, std::span<const std::size_t> pixels) {
  SampleSet out;
  out.classes = static_cast<int>(cube.class_count);
  out.spectra.resize(cube.bands, static_cast<Index>(pixels.size()));
  out.labels.reserve(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const auto s = cube.spectrum(pixels[i]);
    for (std::uint32_t b = 0; b < cube.bands; ++b) out.spectra(b, static_cast<Index>(i)) = s[b];
    out.labels.push_back(cube.labels[pixels[i]]);
  }
  return out;
}

namespace {

VectorXd concat(const VectorXd& code, const Eigen::Ref<const VectorXd>& spectrum) {
  VectorXd v(code.size() + spectrum.size());
  v << code, spectrum;
  return v;
}

}  // namespace

EmbeddedSample make_positive(const Eigen::Ref<const VectorXd>& spectrum, int true_label,
                             const LabelEncoding& enc) {
  return {concat(enc.encode(true_label), spectrum), true_label, true_label, Polarity::positive};
}

int draw_wrong_label(int true_label, int classes, Rng& rng) {
  if (classes < 2) throw ConfigError("negative samples need at least 2 classes");
  const int pick = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(classes - 1)));
  return pick >= true_label ? pick + 1 : pick;
}

EmbeddedSample make_negative(const Eigen::Ref<const VectorXd>& spectrum, int true_label,
                             const LabelEncoding& enc, Rng& rng) {
  const int wrong = draw_wrong_label(true_label, enc.classes, rng);
  return {concat(enc.encode(wrong), spectrum), true_label, wrong, Polarity::negative};
}

VectorXd neutral_embed(const Eigen::Ref<const VectorXd>& spectrum, const LabelEncoding& enc) {
  return concat(enc.neutral(), spectrum);
}

MatrixXd embed_batch(const MatrixXd& spectra, std::span<const int> labels,
                     const LabelEncoding& enc) {
  require_dim(static_cast<Index>(labels.size()) == spectra.cols(), "embed_batch: label count mismatch");
  const Index code = enc.code_len();
  MatrixXd out(code + spectra.rows(), spectra.cols());
  out.bottomRows(spectra.rows()) = spectra;
  for (Index s = 0; s < spectra.cols(); ++s) out.col(s).head(code) = enc.encode(labels[s]);
  return out;
}

MatrixXd neutral_batch(const MatrixXd& spectra, const LabelEncoding& enc) {
  const Index code = enc.code_len();
  MatrixXd out(code + spectra.rows(), spectra.cols());
  out.bottomRows(spectra.rows()) = spectra;
  out.topRows(code) = enc.neutral().replicate(1, spectra.cols());
  return out;
}

}  // namespace ffhsi
