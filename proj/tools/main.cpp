#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attnet/config.hpp"
#include "attnet/gradcheck.hpp"

using namespace attnet;

namespace {

// Exit-code contract: 0 ok, 1 verification failure, 2 usage/config error,
// 3 expectation mismatch, 4 numeric abort.
constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitExpectation = 3;
constexpr int kExitNumeric = 4;

struct ParamsArgs {
    std::string family = "resnetv1";
    int depth = 50;
    std::string attention = "none";
    int reduction = 16;
    std::string integration = "m2";
    std::string activation = "elu";
    int classes = 7;
    int channels = 3;
    int height = 80;
    int width = 80;
    double gamma = 2.0;
    double b = 1.0;
    int fixed_k = -1;
    int spatial_kernel = 7;
    int fc1 = 4096;
    int fc2 = 4096;
    double expect = -1.0;
    double tol = 1.0;
};

int cmd_params(const ParamsArgs& a) {
    ModelSpec spec;
    spec.family = family_from_name(a.family);
    spec.depth = a.depth;
    spec.attention.kind = attention_from_name(a.attention);
    spec.attention.r = a.reduction;
    spec.attention.eca_gamma = a.gamma;
    spec.attention.eca_b = a.b;
    if (a.fixed_k > 0) spec.attention.eca_fixed_k = a.fixed_k;
    spec.attention.spatial_kernel = a.spatial_kernel;
    spec.vgg_integration = integration_from_name(a.integration);
    spec.activation = act_from_name(a.activation);
    spec.classes = a.classes;
    spec.input = Shape4{1, a.channels, a.height, a.width};
    spec.fc1 = a.fc1;
    spec.fc2 = a.fc2;

    Model model = build_model(spec);
    const int64_t total = model.count_params();
    const double millions = total / 1e6;
    std::printf("family\tdepth\tattention\tparams\tmillions\n");
    std::printf("%s\t%d\t%s\t%lld\t%.2f\n", family_name(spec.family).c_str(), spec.depth,
                attention_name(spec.attention.kind).c_str(), static_cast<long long>(total),
                millions);
    if (a.expect > 0.0) {
        const double err_pct = std::abs(millions - a.expect) / a.expect * 100.0;
        std::printf("expected %.2fM, got %.2fM, deviation %.3f%% (tol %.2f%%)\n", a.expect,
                    millions, err_pct, a.tol);
        if (err_pct > a.tol) return kExitExpectation;
    }
    return kExitOk;
}

int cmd_eca_table(const std::vector<int>& channels, double gamma, double b, int fixed_k) {
    std::printf("channels\tk\n");
    for (int c : channels) {
        const int k = fixed_k > 0 ? fixed_k : eca_kernel_size(c, gamma, b);
        std::printf("%d\t%d\n", c, k);
    }
    return kExitOk;
}

int cmd_gradcheck(const std::string& scope_name, uint64_t seed, bool inject_fault) {
    GradScope scope;
    if (scope_name == "layers") scope = GradScope::Layers;
    else if (scope_name == "attention") scope = GradScope::Attention;
    else if (scope_name == "model") scope = GradScope::Model;
    else throw ConfigError("scope must be layers, attention or model");

    std::vector<GradReport> reports = run_gradcheck(scope, seed);
    if (inject_fault) {
        auto fault = make_fault_injected_unit(1.01);
        reports.push_back(check_gradients(*fault, fault->tolerance(), 1e-6, 5, 200, seed));
    }

    bool all_passed = true;
    const GradReport* worst = nullptr;
    for (const auto& r : reports) {
        std::printf("%-24s max_rel_err %.3e  checked %lld  skipped %lld  tol %.0e  %s\n",
                    r.unit.c_str(), r.max_rel_err, static_cast<long long>(r.n_checked),
                    static_cast<long long>(r.n_skipped), r.tolerance,
                    r.passed ? "PASS" : "FAIL");
        if (!r.passed) all_passed = false;
        if (!worst || r.max_rel_err > worst->max_rel_err) worst = &r;
    }
    if (worst)
        std::printf("worst: %s (slot %s, index %lld, rel err %.3e)\n", worst->unit.c_str(),
                    worst->worst_slot.c_str(), static_cast<long long>(worst->worst_index),
                    worst->max_rel_err);
    return all_passed ? kExitOk : kExitVerification;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& out_dir, int repeats_flag, bool quiet) {
    RunConfig cfg = load_run_config(config_path);
    apply_overrides(cfg, overrides);
    if (repeats_flag > 0) cfg.repeats = repeats_flag;
    if (cfg.repeats < 1) throw ConfigError("repeats must be >= 1");

    TrainRunResult result = run_training(cfg, out_dir, quiet);
    for (size_t i = 0; i < result.per_run_val.size(); ++i)
        std::printf("run %zu: train_acc %.6f val_acc %.6f\n", i + 1,
                    result.per_run_train[i].accuracy, result.per_run_val[i].accuracy);
    std::printf("{\"acc\": %.6f, \"runs\": %d}\n", result.best_accuracy, cfg.repeats);
    return kExitOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& config_path,
             const std::vector<std::string>& overrides) {
    Model model = load_model_from_checkpoint(checkpoint);
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    apply_overrides(cfg, overrides);
    DatasetBatch data = load_dataset(cfg.data, model.spec());
    const Metrics metrics = evaluate(model, data);
    for (size_t c = 0; c < metrics.per_class_accuracy.size(); ++c)
        std::printf("class %zu accuracy %.6f\n", c, metrics.per_class_accuracy[c]);
    std::printf("{\"acc\": %.6f, \"loss\": %.6f}\n", metrics.accuracy, metrics.loss);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attnet: attention-augmented CNN micro-framework"};
    app.require_subcommand(1);

    ParamsArgs pa;
    auto* params = app.add_subcommand("params", "print parameter counts for a model spec");
    params->add_option("--family", pa.family, "tinyvgg|vgg|resnetv1|resnetv2");
    params->add_option("--depth", pa.depth, "4|16|19|50|101|152");
    params->add_option("--attention", pa.attention, "none|se|eca|cbam");
    params->add_option("--r,--reduction", pa.reduction, "reduction ratio");
    params->add_option("--integration", pa.integration, "vgg site: m1|m2|m3");
    params->add_option("--activation", pa.activation, "relu|elu|selu");
    params->add_option("--classes", pa.classes);
    params->add_option("--channels", pa.channels);
    params->add_option("--height", pa.height);
    params->add_option("--width", pa.width);
    params->add_option("--gamma", pa.gamma, "eca adaptive gamma");
    params->add_option("--b", pa.b, "eca adaptive b");
    params->add_option("--fixed-k", pa.fixed_k, "fixed eca kernel size");
    params->add_option("--spatial-kernel", pa.spatial_kernel);
    params->add_option("--fc1", pa.fc1);
    params->add_option("--fc2", pa.fc2);
    params->add_option("--expect", pa.expect, "expected count in millions");
    params->add_option("--tol", pa.tol, "tolerance percent for --expect");

    std::vector<int> eca_channels;
    double eca_gamma = 2.0, eca_b = 1.0;
    int eca_fixed_k = -1;
    auto* eca = app.add_subcommand("eca-table", "print the adaptive kernel size per channel count");
    eca->add_option("channels", eca_channels, "channel counts")->required();
    eca->add_option("--gamma", eca_gamma);
    eca->add_option("--b", eca_b);
    eca->add_option("--fixed-k", eca_fixed_k);

    std::string gc_scope = "layers";
    uint64_t gc_seed = 1;
    bool gc_fault = false;
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference certification");
    gradcheck->add_option("scope", gc_scope, "layers|attention|model")->required();
    gradcheck->add_option("--seed", gc_seed);
    gradcheck->add_flag("--inject-fault", gc_fault)->group("");  // test fixture, hidden

    std::string train_config, train_out = "train_out";
    std::vector<std::string> train_sets;
    int train_repeats = -1;
    bool train_quiet = false;
    auto* train = app.add_subcommand("train", "train per a config file and save a checkpoint");
    train->add_option("--config", train_config, "key = value config file")->required();
    train->add_option("--set", train_sets, "override key=value (repeatable)");
    train->add_option("--out", train_out, "output directory");
    train->add_option("--repeats", train_repeats, "run N seeds, report the max");
    train->add_flag("--quiet", train_quiet);

    std::string eval_ckpt, eval_config;
    std::vector<std::string> eval_sets;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    eval_cmd->add_option("--checkpoint", eval_ckpt)->required();
    eval_cmd->add_option("--config", eval_config, "dataset config file");
    eval_cmd->add_option("--set", eval_sets, "override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (params->parsed()) return cmd_params(pa);
        if (eca->parsed()) return cmd_eca_table(eca_channels, eca_gamma, eca_b, eca_fixed_k);
        if (gradcheck->parsed()) return cmd_gradcheck(gc_scope, gc_seed, gc_fault);
        if (train->parsed())
            return cmd_train(train_config, train_sets, train_out, train_repeats, train_quiet);
        if (eval_cmd->parsed()) return cmd_eval(eval_ckpt, eval_config, eval_sets);
    } catch (const NonFinite& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const BadDepth& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BadReduction& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BadChannelCount& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BadKernel& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const EmptyDataset& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
