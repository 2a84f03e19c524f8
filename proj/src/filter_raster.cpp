#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>

#include "filter_internal.hpp"
#include "shapetone/filter.hpp"

namespace shapetone::filter {

namespace {

constexpr const char* kDecodeErrorMessage =
    "the uploaded image cannot be processed. Please, upload a different image";

std::uint8_t luminance(double r, double g, double b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::clamp(std::lround(y), 0L, 255L));
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;

    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

ImageRaster load_png(const std::string& path) {
    PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp) throw DecodeError(kDecodeErrorMessage);

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw DecodeError(kDecodeErrorMessage);
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw DecodeError(kDecodeErrorMessage);
    if (setjmp(png_jmpbuf(r.png))) throw DecodeError(kDecodeErrorMessage);

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    png_set_strip_16(r.png);
    png_set_packing(r.png);
    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
    png_read_update_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int channels = png_get_channels(r.png, r.info);
    if (w == 0 || h == 0 || channels < 1 || channels > 4) throw DecodeError(kDecodeErrorMessage);

    const std::size_t stride = static_cast<std::size_t>(w) * channels;
    std::vector<std::uint8_t> data(stride * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * stride;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    ImageRaster img{static_cast<int>(w), static_cast<int>(h), {}};
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const std::uint8_t* px = data.data() + i * channels;
        double rr, gg, bb, aa = 255.0;
        switch (channels) {
            case 1: rr = gg = bb = px[0]; break;
            case 2: rr = gg = bb = px[0]; aa = px[1]; break;
            case 3: rr = px[0]; gg = px[1]; bb = px[2]; break;
            default: rr = px[0]; gg = px[1]; bb = px[2]; aa = px[3]; break;
        }
        // Composite over white paper.
        const double a = aa / 255.0;
        img.pixels[i] = luminance(rr * a + 255.0 * (1.0 - a), gg * a + 255.0 * (1.0 - a),
                                  bb * a + 255.0 * (1.0 - a));
    }
    return img;
}

int pgm_token(std::ifstream& in) {
    // Skips whitespace and '#' comments between header tokens.
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF || !std::isdigit(c)) throw DecodeError(kDecodeErrorMessage);
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 26) throw DecodeError(kDecodeErrorMessage);
        c = in.get();
    }
    return value;
}

ImageRaster load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError(kDecodeErrorMessage);
    char magic[2] = {};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5') throw DecodeError(kDecodeErrorMessage);

    const int w = pgm_token(in);
    const int h = pgm_token(in);
    const int maxval = pgm_token(in);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 255) throw DecodeError(kDecodeErrorMessage);

    ImageRaster img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h)};
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
        throw DecodeError(kDecodeErrorMessage);
    if (maxval != 255) {
        for (auto& p : img.pixels)
            p = static_cast<std::uint8_t>(p * 255 / maxval);
    }
    return img;
}

}  // namespace

ImageRaster load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw DecodeError(kDecodeErrorMessage);
    std::array<unsigned char, 8> sig{};
    probe.read(reinterpret_cast<char*>(sig.data()), sig.size());
    const std::streamsize got = probe.gcount();
    probe.close();

    static const std::array<unsigned char, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (got >= 8 && std::equal(png_sig.begin(), png_sig.end(), sig.begin())) return load_png(path);
    if (got >= 2 && sig[0] == 'P' && sig[1] == '5') return load_pgm(path);
    throw DecodeError(kDecodeErrorMessage);
}

int otsu_threshold(const ImageRaster& img) {
    std::array<long long, 256> hist{};
    for (const auto p : img.pixels) ++hist[p];
    const double total = static_cast<double>(img.pixels.size());

    double sum_all = 0.0;
    for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

    double best_var = -1.0;
    int best_t = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<double>(t) * hist[t];
        const double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double mu0 = sum0 / w0;
        const double mu1 = (sum_all - sum0) / w1;
        const double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    // Single-valued image: nothing separates, put everything in background.
    if (best_var < 0.0) return -1;
    return best_t;
}

kets::BinaryRaster binarize(const ImageRaster& img) {
    const int t = otsu_threshold(img);
    kets::BinaryRaster out = kets::make_binary_raster(img.width, img.height);
    if (t < 0) return out;
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = img.pixels[i] <= t ? 1 : 0;
    return out;
}

namespace detail {

double polyline_length(const std::vector<Vec2>& pts, bool closed) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += dist(pts[i - 1], pts[i]);
    if (closed && pts.size() > 2) len += dist(pts.back(), pts.front());
    return len;
}

double shoelace_area(const std::vector<Vec2>& pts) {
    double a = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2& p = pts[i];
        const Vec2& q = pts[(i + 1) % pts.size()];
        a += cross(p, q);
    }
    return std::abs(a) / 2.0;
}

std::vector<Vec2> resample(const std::vector<Vec2>& pts, bool closed, int n) {
    std::vector<Vec2> chain = pts;
    if (closed && !chain.empty()) chain.push_back(chain.front());
    if (chain.size() < 2 || n < 2) return pts;

    std::vector<double> cum(chain.size(), 0.0);
    for (std::size_t i = 1; i < chain.size(); ++i)
        cum[i] = cum[i - 1] + dist(chain[i - 1], chain[i]);
    const double total = cum.back();
    if (total <= 0.0) return {chain.front()};

    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n));
    std::size_t seg = 0;
    const int last = closed ? n : n - 1;
    for (int k = 0; k < n; ++k) {
        const double target = total * k / last;
        while (seg + 2 < chain.size() && cum[seg + 1] < target) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (target - cum[seg]) / seg_len : 0.0;
        out.push_back(chain[seg] + (chain[seg + 1] - chain[seg]) * t);
    }
    return out;
}

namespace {

struct Grid {
    int w, h;
    bool in(int x, int y) const { return x >= 0 && x < w && y >= 0 && y < h; }
};

// Moore neighborhood in clockwise screen order starting east.
constexpr std::array<std::array<int, 2>, 8> kMoore{
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int moore_dir(int dx, int dy) {
    for (int i = 0; i < 8; ++i)
        if (kMoore[i][0] == dx && kMoore[i][1] == dy) return i;
    return 0;
}

// Traces the boundary of the component carrying `label`, starting at
// `start` with the backtrack cell `back` (a non-component neighbor).
// Classic Moore-neighbor tracing: scan the neighborhood clockwise from the
// backtrack cell, move to the first component pixel, and remember the cell
// examined just before it as the new backtrack. Stops on Jacob's
// criterion (start revisited with the same backtrack).
std::vector<Vec2> moore_trace(const std::vector<int>& labels, const Grid& g, int label,
                              std::array<int, 2> start, std::array<int, 2> back) {
    auto label_at = [&](int x, int y) {
        return g.in(x, y) ? labels[static_cast<std::size_t>(y) * g.w + x] : 0;
    };

    std::vector<Vec2> contour;
    std::array<int, 2> cur = start;
    std::array<int, 2> backtrack = back;
    contour.push_back({static_cast<double>(cur[0]), static_cast<double>(cur[1])});

    const std::size_t limit = static_cast<std::size_t>(g.w) * g.h * 4 + 16;
    for (std::size_t steps = 0; steps < limit; ++steps) {
        const int from = moore_dir(backtrack[0] - cur[0], backtrack[1] - cur[1]);
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (from + k) % 8;
            const int nx = cur[0] + kMoore[d][0];
            const int ny = cur[1] + kMoore[d][1];
            if (label_at(nx, ny) == label) {
                found = d;
                break;
            }
            backtrack = {nx, ny};
        }
        if (found < 0) break;  // isolated pixel
        cur = {cur[0] + kMoore[found][0], cur[1] + kMoore[found][1]};
        if (cur == start && backtrack == back) break;
        contour.push_back({static_cast<double>(cur[0]), static_cast<double>(cur[1])});
    }
    return contour;
}

}  // namespace

std::vector<TracedComponent> trace_components(const kets::BinaryRaster& bin) {
    const Grid g{bin.width, bin.height};
    const std::size_t n = static_cast<std::size_t>(g.w) * g.h;
    std::vector<int> labels(n, 0);

    // 8-connected foreground components.
    std::vector<TracedComponent> comps;
    std::vector<std::array<int, 2>> stack;
    std::vector<std::array<int, 2>> seeds;
    int next_label = 0;
    for (int y = 0; y < g.h; ++y) {
        for (int x = 0; x < g.w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * g.w + x;
            if (!bin.pixels[idx] || labels[idx]) continue;
            ++next_label;
            TracedComponent comp;
            comp.min_x = comp.max_x = x;
            comp.min_y = comp.max_y = y;
            seeds.push_back({x, y});
            stack.assign(1, {x, y});
            labels[idx] = next_label;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++comp.area_px;
                comp.min_x = std::min(comp.min_x, cx);
                comp.max_x = std::max(comp.max_x, cx);
                comp.min_y = std::min(comp.min_y, cy);
                comp.max_y = std::max(comp.max_y, cy);
                for (const auto& d : kMoore) {
                    const int nx = cx + d[0];
                    const int ny = cy + d[1];
                    if (!g.in(nx, ny)) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * g.w + nx;
                    if (bin.pixels[ni] && !labels[ni]) {
                        labels[ni] = next_label;
                        stack.push_back({nx, ny});
                    }
                }
            }
            comps.push_back(std::move(comp));
        }
    }

    // Outer boundaries: the raster-scan seed is the topmost-leftmost pixel,
    // whose west neighbor is outside the component.
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto s = seeds[i];
        comps[i].outer = moore_trace(labels, g, static_cast<int>(i) + 1, s, {s[0] - 1, s[1]});
        comps[i].outer_area = shoelace_area(comps[i].outer);
    }

    // 4-connected background regions that never touch the border are holes;
    // the pixel above a hole's topmost-leftmost cell belongs to the
    // enclosing component.
    std::vector<int> bg_mark(n, 0);
    int bg_label = 0;
    for (int y = 0; y < g.h; ++y) {
        for (int x = 0; x < g.w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * g.w + x;
            if (bin.pixels[idx] || bg_mark[idx]) continue;
            ++bg_label;
            bool touches_border = false;
            std::array<int, 2> top_left{x, y};
            stack.assign(1, {x, y});
            bg_mark[idx] = bg_label;
            static constexpr std::array<std::array<int, 2>, 4> k4{
                {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                if (cx == 0 || cy == 0 || cx == g.w - 1 || cy == g.h - 1) touches_border = true;
                if (cy < top_left[1] || (cy == top_left[1] && cx < top_left[0]))
                    top_left = {cx, cy};
                for (const auto& d : k4) {
                    const int nx = cx + d[0];
                    const int ny = cy + d[1];
                    if (!g.in(nx, ny)) continue;
                    const std::size_t ni = static_cast<std::size_t>(ny) * g.w + nx;
                    if (!bin.pixels[ni] && !bg_mark[ni]) {
                        bg_mark[ni] = bg_label;
                        stack.push_back({nx, ny});
                    }
                }
            }
            if (touches_border) continue;
            const int owner = labels[static_cast<std::size_t>(top_left[1] - 1) * g.w + top_left[0]];
            if (owner <= 0) continue;
            auto rim = moore_trace(labels, g, owner, {top_left[0], top_left[1] - 1}, top_left);
            if (rim.size() >= 3) comps[static_cast<std::size_t>(owner) - 1].hole_rims.push_back(std::move(rim));
        }
    }

    return comps;
}

}  // namespace detail

std::vector<Polyline> extract_contours(const kets::BinaryRaster& bin) {
    std::vector<Polyline> out;
    for (auto& comp : detail::trace_components(bin)) {
        if (comp.outer.size() >= 3) out.push_back({std::move(comp.outer), true});
        for (auto& rim : comp.hole_rims)
            if (rim.size() >= 3) out.push_back({std::move(rim), true});
    }
    std::stable_sort(out.begin(), out.end(), [](const Polyline& a, const Polyline& b) {
        return detail::shoelace_area(a.points) > detail::shoelace_area(b.points);
    });
    return out;
}

}  // namespace shapetone::filter
