#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ltip {

/// Single-channel raster of doubles, row-major.
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, double fill = 0.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(int x, int y) noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    double operator()(int x, int y) const noexcept { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::span<double> row(int y) noexcept { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
    std::span<const double> row(int y) const noexcept { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    bool same_shape(const Plane& other) const noexcept { return width_ == other.width_ && height_ == other.height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Planar multi-channel image. Values are normalized intensities for LDR
/// frames; the same container also carries transform-space data.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, double fill = 0.0);
    explicit Image(std::vector<Plane> channels);

    int width() const noexcept { return channels_.empty() ? 0 : channels_.front().width(); }
    int height() const noexcept { return channels_.empty() ? 0 : channels_.front().height(); }
    int channels() const noexcept { return static_cast<int>(channels_.size()); }
    bool empty() const noexcept { return channels_.empty() || channels_.front().empty(); }

    Plane& channel(int c) { return channels_.at(static_cast<std::size_t>(c)); }
    const Plane& channel(int c) const { return channels_.at(static_cast<std::size_t>(c)); }

    double& operator()(int x, int y, int c) noexcept { return channels_[static_cast<std::size_t>(c)](x, y); }
    double operator()(int x, int y, int c) const noexcept { return channels_[static_cast<std::size_t>(c)](x, y); }

    bool same_shape(const Image& other) const noexcept {
        return channels() == other.channels() && width() == other.width() && height() == other.height();
    }

private:
    std::vector<Plane> channels_;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mean of the channels, (r+g+b)/3 for colour frames.
Plane luminance(const Image& image);

/// Throws DimensionError unless all images share width, height and channel count.
void require_same_shape(std::span<const Image> images, const char* context);

}  // namespace ltip
