#pragma once

// Grayscale image files (binary/ASCII PGM, 8-bit PNG) and CSV export of the
// averaged lifted field.
//
// Pixel (i, j) of an Image is column i, row j of the file. Gray levels map
// linearly between [0, 255] and [0, 1]; on write, values are clamped to
// [0, 1] and rounded to the nearest level.

#include <stdexcept>
#include <string>

#include "rtv/grid.hpp"

namespace rtv {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads P2/P5 PGM or PNG, chosen by the file signature. Colour PNGs are
/// converted to gray; 16-bit samples are reduced to 8 bits.
Image read_image(const std::string& path);

/// Writes PNG when the path ends in ".png" (any case), binary PGM otherwise.
void write_image(const Image& img, const std::string& path);

/// Mask files are gray images of the same size: 255 marks a known pixel,
/// 0 an unknown one. Any level >= 128 counts as known. Returns the set of
/// unknown pixels (the inpainting domain).
PixelMask read_inpainting_mask(const std::string& path);
void write_inpainting_mask(const PixelMask& unknown, const std::string& path);

/// Generic marker file: pixels with level >= 128 are set.
PixelMask read_marker_mask(const std::string& path);

/// CSV with header `i,j,k,theta,sigma1,sigma2,sigma_theta` and one record
/// per volume in storage order. Numbers use 17 significant digits, so
/// reading the file back reproduces every double exactly.
void export_field(const AveragedField& sigma_hat, const GridSpec& g, const std::string& path);
std::string field_csv(const AveragedField& sigma_hat, const GridSpec& g);

/// Reads a file written by export_field for the given grid. Throws IoError
/// on a malformed header, wrong record count or indices out of range.
AveragedField import_field(const std::string& path, const GridSpec& g);

}  // namespace rtv
