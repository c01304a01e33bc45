#include "ltip/image.hpp"

#include <string>

namespace ltip {

Plane::Plane(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw DimensionError("negative plane dimensions");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, int channels, double fill) {
    if (channels <= 0) throw DimensionError("image needs at least one channel");
    channels_.reserve(static_cast<std::size_t>(channels));
    for (int c = 0; c < channels; ++c) channels_.emplace_back(width, height, fill);
}

Image::Image(std::vector<Plane> channels) : channels_(std::move(channels)) {
    if (channels_.empty()) throw DimensionError("image needs at least one channel");
    for (const auto& p : channels_) {
        if (!p.same_shape(channels_.front())) throw DimensionError("image channels differ in size");
    }
}

Plane luminance(const Image& image) {
    Plane out(image.width(), image.height());
    if (image.empty()) return out;
    const double inv = 1.0 / image.channels();
    auto dst = out.values();
    for (int c = 0; c < image.channels(); ++c) {
        auto src = image.channel(c).values();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    for (double& v : dst) v *= inv;
    return out;
}

void require_same_shape(std::span<const Image> images, const char* context) {
    if (images.empty()) return;
    const Image& ref = images.front();
    for (std::size_t i = 1; i < images.size(); ++i) {
        if (!images[i].same_shape(ref)) {
            throw DimensionError(std::string(context) + ": frame " + std::to_string(i) + " is " +
                                 std::to_string(images[i].width()) + "x" + std::to_string(images[i].height()) + "x" +
                                 std::to_string(images[i].channels()) + ", expected " + std::to_string(ref.width()) +
                                 "x" + std::to_string(ref.height()) + "x" + std::to_string(ref.channels()));
        }
    }
}

}  // namespace ltip
