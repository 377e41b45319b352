#include "gaitidx/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace gaitidx {

using nlohmann::json;

RunConfig default_run_config() { return RunConfig{}; }

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        require(allowed.count(key) > 0, "config: unknown key '" + key + "' in " + where);
    }
}

template <class T>
void get_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void get_path(const json& obj, const char* key, std::filesystem::path& out) {
    if (obj.contains(key)) out = obj.at(key).get<std::string>();
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("config: invalid JSON in " + path.string() + ": " + e.what());
    }

    RunConfig cfg;
    check_keys(j, {"seed", "jobs", "paths", "window", "synth", "train", "score", "eval"}, "config root");
    get_if(j, "seed", cfg.seed);
    get_if(j, "jobs", cfg.jobs);
    require(cfg.jobs >= 1, "config: jobs must be at least 1");

    if (j.contains("paths")) {
        const json& p = j["paths"];
        check_keys(p, {"dataset_dir", "model_dir", "output_dir"}, "paths");
        get_path(p, "dataset_dir", cfg.dataset_dir);
        get_path(p, "model_dir", cfg.model_dir);
        get_path(p, "output_dir", cfg.output_dir);
    }
    if (j.contains("window")) {
        const json& w = j["window"];
        check_keys(w, {"segment_len", "train_stride"}, "window");
        get_if(w, "segment_len", cfg.window.segment_len);
        get_if(w, "train_stride", cfg.window.stride);
    }
    if (j.contains("synth")) {
        const json& s = j["synth"];
        check_keys(s,
                   {"subjects", "train_subjects", "frames", "fps", "cadence_steps_per_s",
                    "noise_amplitude", "depth_noise_scale", "asymmetry_levels"},
                   "synth");
        get_if(s, "subjects", cfg.synth.subjects);
        get_if(s, "train_subjects", cfg.synth.train_subjects);
        get_if(s, "frames", cfg.synth.frames);
        get_if(s, "fps", cfg.synth.fps);
        get_if(s, "cadence_steps_per_s", cfg.synth.cadence_steps_per_s);
        get_if(s, "noise_amplitude", cfg.synth.noise_amplitude);
        get_if(s, "depth_noise_scale", cfg.synth.depth_noise_scale);
        if (s.contains("asymmetry_levels")) {
            const json& a = s["asymmetry_levels"];
            require(a.is_array() && a.size() == 8,
                    "config: synth.asymmetry_levels must list 8 values (one per abnormal style)");
            for (size_t i = 0; i < 8; ++i) cfg.synth.asymmetry_levels[i] = a[i].get<double>();
        }
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        check_keys(t,
                   {"epochs", "learning_rate", "batch_size", "hidden_dim", "dropout_keep", "adam_beta1",
                    "adam_beta2", "adam_epsilon", "grad_clip", "teacher_forcing"},
                   "train");
        get_if(t, "epochs", cfg.train.epochs);
        get_if(t, "learning_rate", cfg.train.learning_rate);
        get_if(t, "batch_size", cfg.train.batch_size);
        get_if(t, "hidden_dim", cfg.train.hidden_dim);
        get_if(t, "dropout_keep", cfg.train.dropout_keep);
        get_if(t, "adam_beta1", cfg.train.adam_beta1);
        get_if(t, "adam_beta2", cfg.train.adam_beta2);
        get_if(t, "adam_epsilon", cfg.train.adam_epsilon);
        get_if(t, "grad_clip", cfg.train.grad_clip);
        get_if(t, "teacher_forcing", cfg.train.teacher_forcing);
    }
    if (j.contains("score")) {
        const json& s = j["score"];
        check_keys(s, {"include_train_split"}, "score");
        get_if(s, "include_train_split", cfg.score_include_train);
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        check_keys(e, {"threshold", "dropout_scores", "write_roc"}, "eval");
        if (e.contains("threshold")) cfg.eval_threshold = e.at("threshold").get<double>();
        get_path(e, "dropout_scores", cfg.eval_dropout_scores);
        get_if(e, "write_roc", cfg.eval_write_roc);
    }

    // seeds derive from the root seed
    cfg.synth.seed = cfg.seed;
    cfg.train.seed = cfg.seed;
    return cfg;
}

}  // namespace gaitidx
