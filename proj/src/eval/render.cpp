#include "ffhsi/eval/render.hpp"

#include <iostream>

#include "ffhsi/io/binary.hpp"

namespace ffhsi {

Image render_labels(std::uint32_t height, std::uint32_t width, std::span<const std::uint16_t> labels,
                    std::span<const Rgb> palette) {
  if (labels.size() != std::size_t(height) * width) {
    throw ConfigError("label map size does not match image dimensions");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = labels[i];
    if (l == 0) continue;
    if (l > palette.size()) throw ConfigError("label " + std::to_string(l) + " has no palette color");
    img.pixels[i] = palette[l - 1];
  }
  return img;
}

ClassMaps render_map(const HsiCube& cube, std::span<const std::uint16_t> predictions) {
  if (predictions.size() != cube.pixel_count()) {
    throw ConfigError("prediction map has " + std::to_string(predictions.size()) + " entries, cube has " +
                      std::to_string(cube.pixel_count()) + " pixels");
  }
  const std::vector<Rgb> palette = cube.palette.empty() ? default_palette(cube.class_count) : cube.palette;
  std::vector<std::uint16_t> shown(predictions.begin(), predictions.end());
  ClassMaps maps;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (cube.labels[i] == 0 && shown[i] != 0) {
      shown[i] = 0;
      ++maps.ignored_predictions;
    }
  }
  if (maps.ignored_predictions > 0) {
    std::cerr << "warning: ignored " << maps.ignored_predictions
              << " predictions on unlabeled pixels\n";
  }
  maps.ground_truth = render_labels(cube.height, cube.width, cube.labels, palette);
  maps.prediction = render_labels(cube.height, cube.width, shown, palette);
  return maps;
}

std::vector<std::uint8_t> encode_ppm(const Image& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size() * 3);
  for (const auto& p : image.pixels) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

void write_ppm(const std::string& path, const Image& image) { write_file(path, encode_ppm(image)); }

}  // namespace ffhsi
