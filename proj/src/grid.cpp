#include "sal/grid.hpp"

namespace sal {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownSubtype: return "UnknownSubtype";
    case ErrorCode::UnknownPsi: return "UnknownPsi";
    case ErrorCode::RenderOverflow: return "RenderOverflow";
    case ErrorCode::InfeasiblePlacement: return "InfeasiblePlacement";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonMonotoneIndex: return "NonMonotoneIndex";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyFixationMap: return "EmptyFixationMap";
    case ErrorCode::NoFixations: return "NoFixations";
    case ErrorCode::NoNegatives: return "NoNegatives";
    case ErrorCode::EmptyShuffleSet: return "EmptyShuffleSet";
    case ErrorCode::InvalidMap: return "InvalidMap";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadScalePair: return "BadScalePair";
    case ErrorCode::UnreadableMap: return "UnreadableMap";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateConstantInput: return "DegenerateConstantInput";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

RgbImage::RgbImage(int width, int height, Rgb fill) : dims_{width, height} {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative image dimensions");
  bytes_.resize(3 * dims_.area());
  for (std::size_t i = 0; i < dims_.area(); ++i) {
    bytes_[3 * i] = fill.r;
    bytes_[3 * i + 1] = fill.g;
    bytes_[3 * i + 2] = fill.b;
  }
}

Map to_luma(const RgbImage& image) {
  Map out(image.dims());
  const auto bytes = image.bytes();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (0.299 * bytes[3 * i] + 0.587 * bytes[3 * i + 1] + 0.114 * bytes[3 * i + 2]) / 255.0;
  }
  return out;
}

}  // namespace sal
