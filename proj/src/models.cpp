#include "attnet/models.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "attnet/rng.hpp"

namespace attnet {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

// ----------------------------------------------------------- enum names

std::string family_name(Family f) {
    switch (f) {
        case Family::TinyVGG: return "tinyvgg";
        case Family::VGG: return "vgg";
        case Family::ResNetV1: return "resnetv1";
        case Family::ResNetV2: return "resnetv2";
    }
    return "vgg";
}

Family family_from_name(const std::string& name) {
    if (name == "tinyvgg") return Family::TinyVGG;
    if (name == "vgg") return Family::VGG;
    if (name == "resnetv1" || name == "resnet") return Family::ResNetV1;
    if (name == "resnetv2") return Family::ResNetV2;
    throw ConfigError("unknown model family '" + name + "'");
}

std::string attention_name(AttentionKind k) {
    switch (k) {
        case AttentionKind::None: return "none";
        case AttentionKind::SE: return "se";
        case AttentionKind::ECA: return "eca";
        case AttentionKind::CBAM: return "cbam";
    }
    return "none";
}

AttentionKind attention_from_name(const std::string& name) {
    if (name == "none") return AttentionKind::None;
    if (name == "se") return AttentionKind::SE;
    if (name == "eca") return AttentionKind::ECA;
    if (name == "cbam") return AttentionKind::CBAM;
    throw ConfigError("unknown attention kind '" + name + "'");
}

std::string integration_name(VggIntegration m) {
    switch (m) {
        case VggIntegration::M1: return "m1";
        case VggIntegration::M2: return "m2";
        case VggIntegration::M3: return "m3";
    }
    return "m2";
}

VggIntegration integration_from_name(const std::string& name) {
    if (name == "m1") return VggIntegration::M1;
    if (name == "m2") return VggIntegration::M2;
    if (name == "m3") return VggIntegration::M3;
    throw ConfigError("unknown vgg integration '" + name + "'");
}

// ------------------------------------------------------- canonical text

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string ModelSpec::canonical_text() const {
    std::map<std::string, std::string> kv;
    kv["activation"] = act_name(activation);
    kv["attention"] = attention_name(attention.kind);
    kv["classes"] = std::to_string(classes);
    kv["depth"] = std::to_string(depth);
    kv["eca_b"] = format_double(attention.eca_b);
    kv["eca_fixed_k"] =
        attention.eca_fixed_k ? std::to_string(*attention.eca_fixed_k) : "none";
    kv["eca_gamma"] = format_double(attention.eca_gamma);
    kv["family"] = family_name(family);
    kv["fc1"] = std::to_string(fc1);
    kv["fc2"] = std::to_string(fc2);
    kv["input_c"] = std::to_string(input.c);
    kv["input_h"] = std::to_string(input.h);
    kv["input_w"] = std::to_string(input.w);
    kv["mlp_activation"] =
        attention.mlp_activation ? act_name(*attention.mlp_activation) : "default";
    kv["reduction"] = std::to_string(attention.r);
    kv["spatial_kernel"] = std::to_string(attention.spatial_kernel);
    kv["vgg_integration"] = integration_name(vgg_integration);

    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

ModelSpec ModelSpec::from_canonical_text(const std::string& text) {
    ModelSpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("bad spec line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "activation") spec.activation = act_from_name(val);
        else if (key == "attention") spec.attention.kind = attention_from_name(val);
        else if (key == "classes") spec.classes = std::stoi(val);
        else if (key == "depth") spec.depth = std::stoi(val);
        else if (key == "eca_b") spec.attention.eca_b = std::stod(val);
        else if (key == "eca_fixed_k")
            spec.attention.eca_fixed_k =
                (val == "none") ? std::nullopt : std::optional<int>(std::stoi(val));
        else if (key == "eca_gamma") spec.attention.eca_gamma = std::stod(val);
        else if (key == "family") spec.family = family_from_name(val);
        else if (key == "fc1") spec.fc1 = std::stoi(val);
        else if (key == "fc2") spec.fc2 = std::stoi(val);
        else if (key == "input_c") spec.input.c = std::stoi(val);
        else if (key == "input_h") spec.input.h = std::stoi(val);
        else if (key == "input_w") spec.input.w = std::stoi(val);
        else if (key == "mlp_activation")
            spec.attention.mlp_activation =
                (val == "default") ? std::nullopt : std::optional<ActivationKind>(act_from_name(val));
        else if (key == "reduction") spec.attention.r = std::stoi(val);
        else if (key == "spatial_kernel") spec.attention.spatial_kernel = std::stoi(val);
        else if (key == "vgg_integration") spec.vgg_integration = integration_from_name(val);
        else throw ConfigError("unknown spec key '" + key + "'");
    }
    return spec;
}

// ------------------------------------------------------------ Bottleneck

Bottleneck::Bottleneck(bool pre_activation, int in_channels, int planes, int stride,
                       ActivationKind act, std::unique_ptr<Node> attention, std::string name)
    : name_(std::move(name)),
      pre_activation_(pre_activation),
      in_channels_(in_channels),
      out_channels_(4 * planes),
      stride_(stride) {
    const bool project = (in_channels_ != out_channels_) || (stride_ != 1);
    auto conv = [](int in_c, int out_c, int k, int s) {
        return std::make_unique<Conv2d>(
            in_c, ConvSpec{.out_channels = out_c, .kh = k, .kw = k, .sh = s, .sw = s,
                           .padding = k == 1 ? Padding::Valid : Padding::Same,
                           .use_bias = false});
    };

    branch_ = std::make_unique<Sequential>(name_ + ".branch");
    if (pre_activation_) {
        pre_bn_ = std::make_unique<BatchNorm2d>(in_channels_);
        pre_act_ = std::make_unique<Activation>(act);
        branch_->add(conv(in_channels_, planes, 1, 1));
        branch_->add(std::make_unique<BatchNorm2d>(planes));
        branch_->add(std::make_unique<Activation>(act));
        branch_->add(conv(planes, planes, 3, stride_));
        branch_->add(std::make_unique<BatchNorm2d>(planes));
        branch_->add(std::make_unique<Activation>(act));
        branch_->add(conv(planes, out_channels_, 1, 1));
        if (project) {
            shortcut_ = std::make_unique<Sequential>(name_ + ".proj");
            shortcut_->add(conv(in_channels_, out_channels_, 1, stride_));
        }
    } else {
        branch_->add(conv(in_channels_, planes, 1, 1));
        branch_->add(std::make_unique<BatchNorm2d>(planes));
        branch_->add(std::make_unique<Activation>(act));
        branch_->add(conv(planes, planes, 3, stride_));
        branch_->add(std::make_unique<BatchNorm2d>(planes));
        branch_->add(std::make_unique<Activation>(act));
        branch_->add(conv(planes, out_channels_, 1, 1));
        branch_->add(std::make_unique<BatchNorm2d>(out_channels_));
        post_act_ = std::make_unique<Activation>(act);
        if (project) {
            shortcut_ = std::make_unique<Sequential>(name_ + ".proj");
            shortcut_->add(conv(in_channels_, out_channels_, 1, stride_));
            shortcut_->add(std::make_unique<BatchNorm2d>(out_channels_));
        }
    }
    if (attention) branch_->add(std::move(attention));
}

Tensor Bottleneck::forward(const Tensor& x, Mode mode) {
    x_ = x;
    Tensor branch_in = x;
    if (pre_activation_) {
        preact_ = pre_act_->forward(pre_bn_->forward(x, mode), mode);
        branch_in = preact_;
    }
    Tensor b = branch_->forward(branch_in, mode);

    if (identity_enabled_) {
        Tensor s;
        if (shortcut_)
            s = shortcut_->forward(pre_activation_ ? preact_ : x, mode);
        else
            s = x;
        if (!b.same_shape(s))
            throw ShapeMismatch(name_ + ": branch and shortcut shapes differ");
        for (int64_t i = 0; i < b.size(); ++i) b[i] += s[i];
    }
    cached_ = true;
    if (pre_activation_) return b;  // no post-activation in V2
    return post_act_->forward(b, mode);
}

Tensor Bottleneck::backward(const Tensor& upstream) {
    take_cache();
    Tensor dsum = pre_activation_ ? upstream : post_act_->backward(upstream);

    Tensor dbranch_in = branch_->backward(dsum);
    if (pre_activation_) {
        Tensor dpre = dbranch_in;
        if (identity_enabled_ && shortcut_) {
            Tensor ds = shortcut_->backward(dsum);
            for (int64_t i = 0; i < dpre.size(); ++i) dpre[i] += ds[i];
        }
        Tensor gx = pre_bn_->backward(pre_act_->backward(dpre));
        if (identity_enabled_ && !shortcut_)
            for (int64_t i = 0; i < gx.size(); ++i) gx[i] += dsum[i];
        return gx;
    }
    Tensor gx = dbranch_in;
    if (identity_enabled_) {
        if (shortcut_) {
            Tensor ds = shortcut_->backward(dsum);
            for (int64_t i = 0; i < gx.size(); ++i) gx[i] += ds[i];
        } else {
            for (int64_t i = 0; i < gx.size(); ++i) gx[i] += dsum[i];
        }
    }
    return gx;
}

void Bottleneck::collect_params(std::vector<Param*>& out) {
    if (pre_bn_) pre_bn_->collect_params(out);
    branch_->collect_params(out);
    if (shortcut_) shortcut_->collect_params(out);
}

void Bottleneck::visit(const std::function<void(Node&)>& fn) {
    fn(*this);
    if (pre_bn_) pre_bn_->visit(fn);
    if (pre_act_) pre_act_->visit(fn);
    branch_->visit(fn);
    if (shortcut_) shortcut_->visit(fn);
    if (post_act_) post_act_->visit(fn);
}

// --------------------------------------------------------------- builders

namespace {

std::unique_ptr<Node> site_attention(const ModelSpec& spec, int channels) {
    return make_attention_block(channels, spec.attention, spec.activation);
}

Model build_vgg(const ModelSpec& spec) {
    if (spec.depth != 16 && spec.depth != 19)
        throw BadDepth("vgg depth must be 16 or 19, got " + std::to_string(spec.depth));
    const std::vector<int> convs_per_stage =
        (spec.depth == 16) ? std::vector<int>{2, 2, 3, 3, 3} : std::vector<int>{2, 2, 4, 4, 4};
    const int stage_width[5] = {64, 128, 256, 512, 512};
    const int total_convs = spec.depth == 16 ? 13 : 16;
    // "layers 11 and 14" as 1-based conv indices; VGG-16 has only 13 convs,
    // so its second site falls at the head boundary (the last conv).
    const std::vector<int> m3_sites =
        (spec.depth == 16) ? std::vector<int>{11, total_convs} : std::vector<int>{11, 14};

    auto root = std::make_unique<Sequential>("vgg" + std::to_string(spec.depth));
    int in_c = spec.input.c;
    int conv_index = 0;
    for (int stage = 0; stage < 5; ++stage) {
        const int width = stage_width[stage];
        for (int i = 0; i < convs_per_stage[static_cast<size_t>(stage)]; ++i) {
            ++conv_index;
            root->add(std::make_unique<Conv2d>(
                in_c, ConvSpec{.out_channels = width, .kh = 3, .kw = 3, .sh = 1, .sw = 1,
                               .padding = Padding::Same, .use_bias = true},
                "conv" + std::to_string(conv_index)));
            root->add(std::make_unique<Activation>(spec.activation));
            in_c = width;
            const bool m1 = spec.vgg_integration == VggIntegration::M1;
            const bool m3 = spec.vgg_integration == VggIntegration::M3 &&
                            std::find(m3_sites.begin(), m3_sites.end(), conv_index) !=
                                m3_sites.end();
            if (m1 || m3) {
                if (auto block = site_attention(spec, width)) root->add(std::move(block));
            }
        }
        root->add(std::make_unique<MaxPool2d>(2, 2, 2, 2));
    }
    if (spec.vgg_integration == VggIntegration::M2) {
        if (auto block = site_attention(spec, 512)) root->add(std::move(block));
    }

    // head on the flattened final feature map
    const int pooled_h = spec.input.h / 32;  // five 2x2/2 pools
    const int pooled_w = spec.input.w / 32;
    if (pooled_h < 1 || pooled_w < 1) throw DegenerateOutput("vgg input too small for 5 pools");
    root->add(std::make_unique<Flatten>());
    const int flat = 512 * pooled_h * pooled_w;
    root->add(std::make_unique<Dense>(flat, spec.fc1, true, "fc1"));
    root->add(std::make_unique<Activation>(spec.activation));
    root->add(std::make_unique<Dense>(spec.fc1, spec.fc2, true, "fc2"));
    root->add(std::make_unique<Activation>(spec.activation));
    root->add(std::make_unique<Dense>(spec.fc2, spec.classes, true, "fc3"));
    return Model(spec, std::move(root));
}

Model build_resnet(const ModelSpec& spec) {
    int stage_blocks[4];
    switch (spec.depth) {
        case 50: stage_blocks[0] = 3; stage_blocks[1] = 4; stage_blocks[2] = 6; stage_blocks[3] = 3; break;
        case 101: stage_blocks[0] = 3; stage_blocks[1] = 4; stage_blocks[2] = 23; stage_blocks[3] = 3; break;
        case 152: stage_blocks[0] = 3; stage_blocks[1] = 8; stage_blocks[2] = 36; stage_blocks[3] = 3; break;
        default:
            throw BadDepth("resnet depth must be 50, 101 or 152, got " +
                           std::to_string(spec.depth));
    }
    const bool pre_act = spec.family == Family::ResNetV2;
    const int stage_planes[4] = {64, 128, 256, 512};

    auto root = std::make_unique<Sequential>(family_name(spec.family) + std::to_string(spec.depth));
    root->add(std::make_unique<Conv2d>(
        spec.input.c, ConvSpec{.out_channels = 64, .kh = 7, .kw = 7, .sh = 2, .sw = 2,
                               .padding = Padding::Same, .use_bias = false},
        "stem"));
    if (!pre_act) {
        root->add(std::make_unique<BatchNorm2d>(64, "stem.bn"));
        root->add(std::make_unique<Activation>(spec.activation));
    }
    root->add(std::make_unique<MaxPool2d>(3, 3, 2, 2));

    int in_c = 64;
    for (int stage = 0; stage < 4; ++stage) {
        const int planes = stage_planes[stage];
        for (int block = 0; block < stage_blocks[stage]; ++block) {
            const int stride = (stage > 0 && block == 0) ? 2 : 1;
            auto attention = site_attention(spec, 4 * planes);
            root->add(std::make_unique<Bottleneck>(
                pre_act, in_c, planes, stride, spec.activation, std::move(attention),
                "s" + std::to_string(stage + 1) + "b" + std::to_string(block + 1)));
            in_c = 4 * planes;
        }
    }
    if (pre_act) {
        root->add(std::make_unique<BatchNorm2d>(in_c, "final.bn"));
        root->add(std::make_unique<Activation>(spec.activation));
    }
    root->add(std::make_unique<GlobalAvgPool>());
    root->add(std::make_unique<Flatten>());
    root->add(std::make_unique<Dense>(in_c, spec.classes, true, "head"));
    return Model(spec, std::move(root));
}

// Four weighted layers: two 3x3 conv stages and a two-layer classifier
// head, with the attention site on the final conv feature map.
Model build_tiny_vgg(const ModelSpec& spec) {
    if (spec.depth != 4)
        throw BadDepth("tinyvgg depth must be 4, got " + std::to_string(spec.depth));
    auto root = std::make_unique<Sequential>("tinyvgg");
    root->add(std::make_unique<Conv2d>(
        spec.input.c, ConvSpec{.out_channels = 8, .kh = 3, .kw = 3, .sh = 1, .sw = 1,
                               .padding = Padding::Same, .use_bias = true},
        "conv1"));
    root->add(std::make_unique<Activation>(spec.activation));
    root->add(std::make_unique<MaxPool2d>(2, 2, 2, 2));
    root->add(std::make_unique<Conv2d>(
        8, ConvSpec{.out_channels = 16, .kh = 3, .kw = 3, .sh = 1, .sw = 1,
                    .padding = Padding::Same, .use_bias = true},
        "conv2"));
    root->add(std::make_unique<Activation>(spec.activation));
    root->add(std::make_unique<MaxPool2d>(2, 2, 2, 2));
    if (auto block = site_attention(spec, 16)) root->add(std::move(block));
    root->add(std::make_unique<Flatten>());
    const int flat = 16 * (spec.input.h / 4) * (spec.input.w / 4);
    root->add(std::make_unique<Dense>(flat, 32, true, "fc1"));
    root->add(std::make_unique<Activation>(spec.activation));
    root->add(std::make_unique<Dense>(32, spec.classes, true, "fc2"));
    return Model(spec, std::move(root));
}

}  // namespace

Model build_model(const ModelSpec& spec) {
    if (spec.classes < 2) throw ConfigError("classes must be >= 2");
    switch (spec.family) {
        case Family::TinyVGG: return build_tiny_vgg(spec);
        case Family::VGG: return build_vgg(spec);
        case Family::ResNetV1:
        case Family::ResNetV2: return build_resnet(spec);
    }
    throw ConfigError("unhandled model family");
}

// ------------------------------------------------------------------ Model

Model::Model(ModelSpec spec, std::unique_ptr<Node> root)
    : spec_(std::move(spec)), root_(std::move(root)) {
    root_->collect_params(registry_);
}

Tensor Model::forward(const Tensor& x, Mode mode) {
    const Shape4 s = as_shape4(x);
    if (s.c != spec_.input.c || s.h != spec_.input.h || s.w != spec_.input.w)
        throw ShapeMismatch("model input must be (N," + std::to_string(spec_.input.c) + "," +
                            std::to_string(spec_.input.h) + "," + std::to_string(spec_.input.w) +
                            ")");
    Tensor logits = root_->forward(x, mode);
    ensure_all_finite(logits, "model logits");
    return logits;
}

Tensor Model::backward(const Tensor& grad_logits) { return root_->backward(grad_logits); }

int64_t Model::count_params() const {
    int64_t total = 0;
    for (const Param* p : registry_) total += p->value.size();
    return total;
}

void Model::zero_grads() {
    for (Param* p : registry_) p->grad.fill(0.0);
}

void Model::init_params(uint64_t seed) {
    for (size_t p = 0; p < registry_.size(); ++p) {
        Param& param = *registry_[p];
        const uint64_t stream = mix_streams(seed, static_cast<uint64_t>(p));
        switch (param.kind) {
            case ParamKind::ConvWeight: {
                const auto& sh = param.value.shape();
                const double fan_in = static_cast<double>(sh[1]) * sh[2] * sh[3];
                const double std_dev = std::sqrt(2.0 / fan_in);
                double* v = param.value.data();
                const int64_t n = param.value.size();
#pragma omp parallel for schedule(static) if (n > 16384)
                for (int64_t i = 0; i < n; ++i)
                    v[i] = std_dev * normal_at(stream, static_cast<uint64_t>(i));
                break;
            }
            case ParamKind::DenseWeight: {
                const double fan_in = static_cast<double>(param.value.shape()[0]);
                const double std_dev = std::sqrt(2.0 / fan_in);
                double* v = param.value.data();
                const int64_t n = param.value.size();
#pragma omp parallel for schedule(static) if (n > 16384)
                for (int64_t i = 0; i < n; ++i)
                    v[i] = std_dev * normal_at(stream, static_cast<uint64_t>(i));
                break;
            }
            case ParamKind::Conv1dWeight: {
                const double std_dev = std::sqrt(2.0 / static_cast<double>(param.value.size()));
                for (int64_t i = 0; i < param.value.size(); ++i)
                    param.value[i] = std_dev * normal_at(stream, static_cast<uint64_t>(i));
                break;
            }
            case ParamKind::Bias:
            case ParamKind::BnBeta: param.value.fill(0.0); break;
            case ParamKind::BnGamma: param.value.fill(1.0); break;
        }
        param.grad.fill(0.0);
    }
}

int Model::attention_block_count() const {
    int count = 0;
    root_->visit([&count](Node& n) {
        if (n.is_attention_block()) ++count;
    });
    return count;
}

void Model::for_each_node(const std::function<void(Node&)>& fn) const { root_->visit(fn); }

int64_t count_params(const Model& m) { return m.count_params(); }

// ------------------------------------------------------------- checkpoint

namespace {

constexpr char kMagic[4] = {'A', 'T', 'N', 'G'};
constexpr uint32_t kFormat = 1;

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& v) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CheckpointError("unexpected end of checkpoint file");
}

struct CheckpointHeader {
    std::string spec_text;
    uint64_t scalar_count = 0;
};

CheckpointHeader read_header(std::ifstream& in, const std::string& path) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError(path + " is not a model checkpoint");
    uint32_t format = 0;
    read_raw(in, format);
    if (format != kFormat)
        throw CheckpointError("unsupported checkpoint format " + std::to_string(format));
    uint64_t spec_len = 0;
    read_raw(in, spec_len);
    CheckpointHeader h;
    h.spec_text.resize(spec_len);
    in.read(h.spec_text.data(), static_cast<std::streamsize>(spec_len));
    if (!in) throw CheckpointError("unexpected end of checkpoint file");
    read_raw(in, h.scalar_count);
    return h;
}

}  // namespace

void save_checkpoint(Model& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    write_raw(out, kFormat);
    const std::string spec_text = m.spec().canonical_text();
    write_raw(out, static_cast<uint64_t>(spec_text.size()));
    out.write(spec_text.data(), static_cast<std::streamsize>(spec_text.size()));
    write_raw(out, static_cast<uint64_t>(m.count_params()));
    for (Param* p : m.params())
        out.write(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!out) throw CheckpointError("failed writing " + path);
}

void load_checkpoint(Model& m, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path);
    const CheckpointHeader h = read_header(in, path);
    const std::string expected = m.spec().canonical_text();
    if (h.spec_text != expected)
        throw CheckpointError("spec hash mismatch: checkpoint " +
                              std::to_string(fnv1a64(h.spec_text)) + " vs model " +
                              std::to_string(fnv1a64(expected)));
    if (h.scalar_count != static_cast<uint64_t>(m.count_params()))
        throw CheckpointError("checkpoint scalar count does not match model");
    for (Param* p : m.params()) {
        in.read(reinterpret_cast<char*>(p->value.data()),
                static_cast<std::streamsize>(p->value.size() * sizeof(double)));
        if (!in) throw CheckpointError("unexpected end of checkpoint file");
    }
}

Model load_model_from_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open " + path);
    const CheckpointHeader h = read_header(in, path);
    Model m = build_model(ModelSpec::from_canonical_text(h.spec_text));
    if (h.scalar_count != static_cast<uint64_t>(m.count_params()))
        throw CheckpointError("checkpoint scalar count does not match rebuilt model");
    for (Param* p : m.params()) {
        in.read(reinterpret_cast<char*>(p->value.data()),
                static_cast<std::streamsize>(p->value.size() * sizeof(double)));
        if (!in) throw CheckpointError("unexpected end of checkpoint file");
    }
    return m;
}

}  // namespace attnet
