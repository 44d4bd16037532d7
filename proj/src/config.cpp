#include "attnet/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace attnet {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::string dataset_name(DatasetKind k) {
    switch (k) {
        case DatasetKind::Synthetic: return "synthetic";
        case DatasetKind::Fer2013: return "fer2013";
        case DatasetKind::PgmDir: return "pgmdir";
    }
    return "synthetic";
}

std::string usage_name(Usage u) {
    switch (u) {
        case Usage::Training: return "training";
        case Usage::PublicTest: return "publictest";
        case Usage::All: return "all";
    }
    return "training";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    // model
    if (key == "family") model.family = family_from_name(value);
    else if (key == "depth") model.depth = parse_int(key, value);
    else if (key == "classes") model.classes = parse_int(key, value);
    else if (key == "input_channels") model.input.c = parse_int(key, value);
    else if (key == "input_height") model.input.h = parse_int(key, value);
    else if (key == "input_width") model.input.w = parse_int(key, value);
    else if (key == "activation") model.activation = act_from_name(value);
    else if (key == "attention") model.attention.kind = attention_from_name(value);
    else if (key == "reduction") model.attention.r = parse_int(key, value);
    else if (key == "eca_gamma") model.attention.eca_gamma = parse_double(key, value);
    else if (key == "eca_b") model.attention.eca_b = parse_double(key, value);
    else if (key == "eca_fixed_k")
        model.attention.eca_fixed_k =
            (value == "none") ? std::nullopt : std::optional<int>(parse_int(key, value));
    else if (key == "spatial_kernel") model.attention.spatial_kernel = parse_int(key, value);
    else if (key == "mlp_activation")
        model.attention.mlp_activation =
            (value == "default") ? std::nullopt
                                 : std::optional<ActivationKind>(act_from_name(value));
    else if (key == "integration") model.vgg_integration = integration_from_name(value);
    else if (key == "fc1") model.fc1 = parse_int(key, value);
    else if (key == "fc2") model.fc2 = parse_int(key, value);
    // training
    else if (key == "lr") train.lr = parse_double(key, value);
    else if (key == "momentum") train.momentum = parse_double(key, value);
    else if (key == "weight_decay") train.weight_decay = parse_double(key, value);
    else if (key == "batch_size") train.batch_size = parse_int(key, value);
    else if (key == "epochs") train.epochs = parse_int(key, value);
    else if (key == "seed") train.seed = static_cast<uint64_t>(parse_int(key, value));
    else if (key == "shuffle") train.shuffle = parse_bool(key, value);
    else if (key == "repeats") repeats = parse_int(key, value);
    // data
    else if (key == "dataset") {
        if (value == "synthetic") data.kind = DatasetKind::Synthetic;
        else if (value == "fer2013") data.kind = DatasetKind::Fer2013;
        else if (value == "pgmdir") data.kind = DatasetKind::PgmDir;
        else throw ConfigError("unknown dataset kind '" + value + "'");
    } else if (key == "data_path") data.path = value;
    else if (key == "usage") data.usage = usage_from_name(value);
    else if (key == "resize") data.resize = parse_bool(key, value);
    else if (key == "synthetic_classes") data.synthetic_classes = parse_int(key, value);
    else if (key == "synthetic_per_class") data.synthetic_per_class = parse_int(key, value);
    else if (key == "synthetic_height") data.synthetic_h = parse_int(key, value);
    else if (key == "synthetic_width") data.synthetic_w = parse_int(key, value);
    else if (key == "synthetic_noise") data.synthetic_noise = parse_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

std::string RunConfig::resolved_text() const {
    std::map<std::string, std::string> kv;
    kv["family"] = family_name(model.family);
    kv["depth"] = std::to_string(model.depth);
    kv["classes"] = std::to_string(model.classes);
    kv["input_channels"] = std::to_string(model.input.c);
    kv["input_height"] = std::to_string(model.input.h);
    kv["input_width"] = std::to_string(model.input.w);
    kv["activation"] = act_name(model.activation);
    kv["attention"] = attention_name(model.attention.kind);
    kv["reduction"] = std::to_string(model.attention.r);
    kv["eca_gamma"] = format_double(model.attention.eca_gamma);
    kv["eca_b"] = format_double(model.attention.eca_b);
    kv["eca_fixed_k"] =
        model.attention.eca_fixed_k ? std::to_string(*model.attention.eca_fixed_k) : "none";
    kv["spatial_kernel"] = std::to_string(model.attention.spatial_kernel);
    kv["mlp_activation"] =
        model.attention.mlp_activation ? act_name(*model.attention.mlp_activation) : "default";
    kv["integration"] = integration_name(model.vgg_integration);
    kv["fc1"] = std::to_string(model.fc1);
    kv["fc2"] = std::to_string(model.fc2);
    kv["lr"] = format_double(train.lr);
    kv["momentum"] = format_double(train.momentum);
    kv["weight_decay"] = format_double(train.weight_decay);
    kv["batch_size"] = std::to_string(train.batch_size);
    kv["epochs"] = std::to_string(train.epochs);
    kv["seed"] = std::to_string(train.seed);
    kv["shuffle"] = train.shuffle ? "true" : "false";
    kv["repeats"] = std::to_string(repeats);
    kv["dataset"] = dataset_name(data.kind);
    kv["data_path"] = data.path;
    kv["usage"] = usage_name(data.usage);
    kv["resize"] = data.resize ? "true" : "false";
    kv["synthetic_classes"] = std::to_string(data.synthetic_classes);
    kv["synthetic_per_class"] = std::to_string(data.synthetic_per_class);
    kv["synthetic_height"] = std::to_string(data.synthetic_h);
    kv["synthetic_width"] = std::to_string(data.synthetic_w);
    kv["synthetic_noise"] = format_double(data.synthetic_noise);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    RunConfig cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + a + "' is not key=value");
        cfg.set(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
    }
}

DatasetBatch load_dataset(const DataConfig& data, const ModelSpec& model) {
    DatasetBatch batch;
    switch (data.kind) {
        case DatasetKind::Synthetic:
            batch = synthetic_dataset(data.synthetic_classes, data.synthetic_per_class,
                                      data.synthetic_h, data.synthetic_w, 7777,
                                      data.synthetic_noise);
            break;
        case DatasetKind::Fer2013:
            if (!fs::exists(data.path)) throw ConfigError("dataset path missing: " + data.path);
            batch = load_fer2013_csv(data.path, data.usage);
            break;
        case DatasetKind::PgmDir:
            if (!fs::exists(data.path)) throw ConfigError("dataset path missing: " + data.path);
            batch = load_pgm_dir(data.path, model.input.h, model.input.w);
            break;
    }
    if (data.resize) {
        const Shape4 s = as_shape4(batch.images);
        if (s.c != model.input.c || s.h != model.input.h || s.w != model.input.w)
            batch.images =
                preprocess(batch.images, model.input.h, model.input.w, model.input.c);
    }
    return batch;
}

TrainRunResult run_training(const RunConfig& cfg, const std::string& out_dir, bool quiet) {
    fs::create_directories(out_dir);
    {
        std::ofstream cfg_out(fs::path(out_dir) / "resolved_config.txt");
        cfg_out << cfg.resolved_text();
    }
    if (!quiet) std::cout << cfg.resolved_text();

    DatasetBatch train_data = load_dataset(cfg.data, cfg.model);
    TrainRunResult result;
    result.best_accuracy = -1.0;

    for (int run = 1; run <= cfg.repeats; ++run) {
        RunConfig run_cfg = cfg;
        run_cfg.train.seed = cfg.train.seed + static_cast<uint64_t>(run - 1);

        Model model = build_model(run_cfg.model);
        model.init_params(run_cfg.train.seed);
        SgdOptimizer opt(model.params(), run_cfg.train);

        std::ofstream log(fs::path(out_dir) / ("train_log_run" + std::to_string(run) + ".tsv"));
        log << "#epoch\ttrain_loss\ttrain_acc\tval_loss\tval_acc\n";
        Metrics train_metrics, val_metrics;
        for (int epoch = 1; epoch <= run_cfg.train.epochs; ++epoch) {
            train_metrics = train_epoch(model, train_data, opt, run_cfg.train, epoch);
            val_metrics = evaluate(model, train_data);
            char line[160];
            std::snprintf(line, sizeof(line), "%d\t%.6f\t%.6f\t%.6f\t%.6f\n", epoch,
                          train_metrics.loss, train_metrics.accuracy, val_metrics.loss,
                          val_metrics.accuracy);
            log << line;
            if (!quiet)
                std::cout << "run " << run << " epoch " << epoch << " train_loss "
                          << train_metrics.loss << " train_acc " << train_metrics.accuracy
                          << " val_acc " << val_metrics.accuracy << "\n";
        }
        result.per_run_train.push_back(train_metrics);
        result.per_run_val.push_back(val_metrics);

        const std::string run_ckpt =
            (fs::path(out_dir) / ("model_run" + std::to_string(run) + ".ckpt")).string();
        save_checkpoint(model, run_ckpt);
        if (val_metrics.accuracy > result.best_accuracy) {
            result.best_accuracy = val_metrics.accuracy;
            result.best_run = run;
        }
    }

    // The paper-style protocol keeps the best of the repeated runs.
    result.checkpoint_path = (fs::path(out_dir) / "model.ckpt").string();
    fs::copy_file(fs::path(out_dir) / ("model_run" + std::to_string(result.best_run) + ".ckpt"),
                  result.checkpoint_path, fs::copy_options::overwrite_existing);
    return result;
}

}  // namespace attnet
