#include "attnet/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "attnet/rng.hpp"

namespace fs = std::filesystem;

namespace attnet {

Usage usage_from_name(const std::string& name) {
    if (name == "training" || name == "Training") return Usage::Training;
    if (name == "publictest" || name == "PublicTest") return Usage::PublicTest;
    if (name == "all" || name == "All") return Usage::All;
    throw ConfigError("unknown usage filter '" + name + "'");
}

// ------------------------------------------------------------- FER2013

DatasetBatch load_fer2013_csv(const std::string& path, Usage filter) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("missing header", 0);

    constexpr int kPixels = 48 * 48;
    std::vector<double> pixels;
    std::vector<int> labels;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw ParseError("expected emotion,pixels,Usage", row);
        const std::string emotion = line.substr(0, c1);
        const std::string pixel_field = line.substr(c1 + 1, c2 - c1 - 1);
        std::string usage = line.substr(c2 + 1);
        while (!usage.empty() && (usage.back() == '\r' || usage.back() == ' ')) usage.pop_back();

        if (filter == Usage::Training && usage != "Training") continue;
        if (filter == Usage::PublicTest && usage != "PublicTest") continue;

        int label = -1;
        try {
            size_t used = 0;
            label = std::stoi(emotion, &used);
            if (used != emotion.size()) throw std::invalid_argument(emotion);
        } catch (const std::exception&) {
            throw ParseError("non-integer emotion '" + emotion + "'", row);
        }
        if (label < 0 || label > 6) throw ParseError("label outside [0,6]", row);

        std::istringstream ps(pixel_field);
        int count = 0;
        std::string token;
        while (ps >> token) {
            int value = -1;
            try {
                size_t used = 0;
                value = std::stoi(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ParseError("non-integer pixel '" + token + "'", row);
            }
            if (value < 0 || value > 255) throw ParseError("pixel outside [0,255]", row);
            if (count >= kPixels) throw ParseError("too many pixels", row);
            pixels.push_back(value / 255.0);
            ++count;
        }
        if (count != kPixels)
            throw ParseError("expected 2304 pixels, got " + std::to_string(count), row);
        labels.push_back(label);
    }

    DatasetBatch batch;
    batch.class_names = {"angry", "disgust", "fear", "happy", "sad", "surprise", "neutral"};
    batch.labels = std::move(labels);
    const int n = static_cast<int>(batch.labels.size());
    if (n == 0) throw EmptyDataset("no rows matched the usage filter in " + path);
    batch.images = Tensor({n, 1, 48, 48}, std::move(pixels));
    return batch;
}

void save_fer2013_csv(const DatasetBatch& batch, const std::string& path) {
    const Shape4 s = as_shape4(batch.images);
    if (s.c != 1 || s.h != 48 || s.w != 48)
        throw ShapeMismatch("fer2013 writer expects (N,1,48,48) images");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    out << "emotion,pixels,Usage\n";
    const int64_t sample = 48 * 48;
    for (int i = 0; i < s.n; ++i) {
        out << batch.labels[static_cast<size_t>(i)] << ',';
        const double* img = batch.images.data() + i * sample;
        for (int64_t p = 0; p < sample; ++p) {
            if (p) out << ' ';
            out << static_cast<int>(std::lround(img[p] * 255.0));
        }
        out << ",Training\n";
    }
}

// ----------------------------------------------------------------- PGM

namespace {

// Reads one PGM token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {}
            continue;
        }
        if (std::isspace(ch)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(ch));
    }
    return tok;
}

Tensor load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    const std::string magic = pgm_token(in);
    if (magic != "P5")
        throw ParseError(path + ": only binary P5 is supported, got '" + magic + "'", 1);
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(pgm_token(in));
        h = std::stoi(pgm_token(in));
        maxval = std::stoi(pgm_token(in));
    } catch (const std::exception&) {
        throw ParseError(path + ": malformed PGM header", 1);
    }
    if (w < 1 || h < 1) throw ParseError(path + ": bad dimensions", 1);
    if (maxval != 255)
        throw ParseError(path + ": maxval must be 255, got " + std::to_string(maxval), 1);
    std::vector<unsigned char> raw(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw ParseError(path + ": truncated pixel data", 1);
    std::vector<double> data(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) data[i] = raw[i] / 255.0;
    return Tensor({1, 1, h, w}, std::move(data));
}

}  // namespace

DatasetBatch load_pgm_dir(const std::string& root, int target_h, int target_w) {
    if (!fs::is_directory(root)) throw ConfigError(root + " is not a directory");
    std::vector<std::string> classes;
    for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory()) classes.push_back(entry.path().filename().string());
    std::sort(classes.begin(), classes.end());
    if (classes.empty()) throw EmptyDataset("no class subdirectories in " + root);

    DatasetBatch batch;
    batch.class_names = classes;
    std::vector<double> data;
    for (size_t ci = 0; ci < classes.size(); ++ci) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(fs::path(root) / classes[ci]))
            if (entry.is_regular_file() && entry.path().extension() == ".pgm")
                files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            Tensor img = preprocess(load_pgm(file), target_h, target_w, 1);
            data.insert(data.end(), img.data(), img.data() + img.size());
            batch.labels.push_back(static_cast<int>(ci));
        }
    }
    const int n = static_cast<int>(batch.labels.size());
    if (n == 0) throw EmptyDataset("no .pgm files under " + root);
    batch.images = Tensor({n, 1, target_h, target_w}, std::move(data));
    return batch;
}

// ---------------------------------------------------------- preprocess

Tensor preprocess(const Tensor& images, int target_h, int target_w, int channels) {
    const Shape4 s = as_shape4(images);
    if (channels == 0) channels = s.c;
    if (channels != 1 && channels != 3)
        throw ShapeMismatch("preprocess channels must be 1 or 3");
    if (channels != s.c && !(s.c == 1 && channels == 3))
        throw ShapeMismatch("preprocess can only replicate 1 channel to 3");

    // Resize each source channel, then replicate if needed.
    Tensor resized = Tensor::uninitialized({s.n, s.c, target_h, target_w});
    if (target_h == s.h && target_w == s.w) {
        std::copy(images.data(), images.data() + images.size(), resized.data());
    } else {
        const double scale_h = static_cast<double>(s.h) / target_h;
        const double scale_w = static_cast<double>(s.w) / target_w;
        const int64_t in_plane = static_cast<int64_t>(s.h) * s.w;
        const int64_t out_plane = static_cast<int64_t>(target_h) * target_w;
#pragma omp parallel for collapse(2) schedule(static)
        for (int n = 0; n < s.n; ++n) {
            for (int c = 0; c < s.c; ++c) {
                const double* src = images.data() + (static_cast<int64_t>(n) * s.c + c) * in_plane;
                double* dst = resized.data() + (static_cast<int64_t>(n) * s.c + c) * out_plane;
                for (int oh = 0; oh < target_h; ++oh) {
                    double sy = (oh + 0.5) * scale_h - 0.5;
                    sy = std::min(std::max(sy, 0.0), static_cast<double>(s.h - 1));
                    const int y0 = static_cast<int>(std::floor(sy));
                    const int y1 = std::min(y0 + 1, s.h - 1);
                    const double fy = sy - y0;
                    for (int ow = 0; ow < target_w; ++ow) {
                        double sx = (ow + 0.5) * scale_w - 0.5;
                        sx = std::min(std::max(sx, 0.0), static_cast<double>(s.w - 1));
                        const int x0 = static_cast<int>(std::floor(sx));
                        const int x1 = std::min(x0 + 1, s.w - 1);
                        const double fx = sx - x0;
                        const double top = src[static_cast<int64_t>(y0) * s.w + x0] * (1.0 - fx) +
                                           src[static_cast<int64_t>(y0) * s.w + x1] * fx;
                        const double bot = src[static_cast<int64_t>(y1) * s.w + x0] * (1.0 - fx) +
                                           src[static_cast<int64_t>(y1) * s.w + x1] * fx;
                        dst[static_cast<int64_t>(oh) * target_w + ow] =
                            top * (1.0 - fy) + bot * fy;
                    }
                }
            }
        }
    }
    if (channels == s.c) return resized;

    Tensor out = Tensor::uninitialized({s.n, channels, target_h, target_w});
    const int64_t plane = static_cast<int64_t>(target_h) * target_w;
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < channels; ++c)
            std::copy(resized.data() + static_cast<int64_t>(n) * plane,
                      resized.data() + static_cast<int64_t>(n + 1) * plane,
                      out.data() + (static_cast<int64_t>(n) * channels + c) * plane);
    return out;
}

// ------------------------------------------------------------ synthetic

DatasetBatch synthetic_dataset(int classes, int per_class, int h, int w, uint64_t seed,
                               double noise_sigma) {
    if (classes < 2) throw ConfigError("synthetic dataset needs >= 2 classes");
    if (per_class < 1) throw ConfigError("synthetic dataset needs >= 1 sample per class");

    const int n = classes * per_class;
    const double blob_sigma = std::min(h, w) / 8.0;
    DatasetBatch batch;
    batch.images = Tensor::uninitialized({n, 1, h, w});
    for (int k = 0; k < classes; ++k)
        batch.class_names.push_back("class" + std::to_string(k));

    const int64_t plane = static_cast<int64_t>(h) * w;
    for (int i = 0; i < n; ++i) {
        const int k = i / per_class;
        batch.labels.push_back(k);
        const double angle = 2.0 * 3.14159265358979323846 * k / classes;
        const double cy = h * (0.5 + 0.3 * std::sin(angle));
        const double cx = w * (0.5 + 0.3 * std::cos(angle));
        double* img = batch.images.data() + static_cast<int64_t>(i) * plane;
        const uint64_t stream = mix_streams(seed, static_cast<uint64_t>(i));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
                double v = std::exp(-d2 / (2.0 * blob_sigma * blob_sigma));
                if (noise_sigma > 0.0)
                    v += noise_sigma *
                         normal_at(stream, static_cast<uint64_t>(y) * w + x);
                img[static_cast<int64_t>(y) * w + x] = std::min(std::max(v, 0.0), 1.0);
            }
        }
    }
    return batch;
}

}  // namespace attnet
