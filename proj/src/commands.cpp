#include "gaitidx/commands.hpp"

#include <array>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "gaitidx/metrics.hpp"
#include "gaitidx/num_format.hpp"

namespace gaitidx {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 3> kAxisFileTag = {"x", "y", "z"};

std::vector<Skeleton17> load_sequence17(const std::filesystem::path& path) {
    const auto frames25 = read_sequence_csv(path);
    std::vector<Skeleton17> frames;
    frames.reserve(frames25.size());
    for (const Skeleton25& f : frames25) frames.push_back(select_joints(f));
    return frames;
}

void ensure_dir(const std::filesystem::path& dir, const char* what) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(std::string("cli: cannot create ") + what + " directory " + dir.string());
}

// Runs tasks 0..count-1 on up to `jobs` worker threads; task order and
// per-task results are deterministic, so the parallelism never changes
// outputs. The first task failure (by task index) is rethrown.
void run_parallel(int count, int jobs, const std::function<void(int)>& task) {
    const int workers = std::max(1, std::min(jobs, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
            try {
                task(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (int k = 0; k < count; ++k) {
        if (errors[k]) std::rethrow_exception(errors[k]);
    }
}

}  // namespace

void cmd_synth(const RunConfig& cfg) {
    require(cfg.synth.frames >= cfg.window.segment_len,
            "cli: synth.frames (" + std::to_string(cfg.synth.frames) +
                ") is smaller than window.segment_len (" + std::to_string(cfg.window.segment_len) +
                "); sequences could not be windowed");
    generate_synthetic(cfg.synth, cfg.dataset_dir);
}

void cmd_train(const RunConfig& cfg) {
    const DatasetSplits splits = load_manifest(cfg.dataset_dir / "manifest.json");

    std::array<std::vector<AxisSegment>, 3> segments;
    for (const SequenceEntry& entry : splits.train) {
        const auto frames = load_sequence17(entry.path);
        for (const auto& window : window_sequence(frames, cfg.window)) {
            auto segs = make_axis_segments(window);
            for (int k = 0; k < 3; ++k) segments[k].push_back(std::move(segs[k]));
        }
    }

    ensure_dir(cfg.model_dir, "model");

    std::array<AxisModel, 3> models;
    std::array<TrainReport, 3> reports;
    run_parallel(3, cfg.jobs, [&](int k) {
        TrainConfig tc = cfg.train;
        tc.seed = cfg.seed + static_cast<uint64_t>(k);
        auto [model, report] = train_axis_model(segments[k], tc);
        models[k] = std::move(model);
        reports[k] = std::move(report);
    });

    for (int k = 0; k < 3; ++k) {
        save_model(models[k], cfg.model_dir / (std::string("model_") + kAxisFileTag[k] + ".json"));
        write_train_report_csv(cfg.model_dir / (std::string("loss_") + kAxisFileTag[k] + ".csv"),
                               reports[k]);
    }
    const FusionWeights w =
        fusion_weights(models[0].train_mse, models[1].train_mse, models[2].train_mse);
    save_fusion(w, models[0].train_mse, models[1].train_mse, models[2].train_mse,
                cfg.model_dir / "fusion.json");
}

ModelSet load_model_set(const std::filesystem::path& model_dir) {
    ModelSet set;
    set.x = load_model(model_dir / "model_x.json");
    set.y = load_model(model_dir / "model_y.json");
    set.z = load_model(model_dir / "model_z.json");
    require(set.x.axis == Axis::X && set.y.axis == Axis::Y && set.z.axis == Axis::Z,
            "cli: model files in " + model_dir.string() + " have mismatched axes");
    set.weights = load_fusion(model_dir / "fusion.json").weights;
    return set;
}

void cmd_score(const RunConfig& cfg) {
    const ModelSet models = load_model_set(cfg.model_dir);
    const DatasetSplits splits = load_manifest(cfg.dataset_dir / "manifest.json");

    std::vector<SequenceEntry> entries = splits.test;
    if (cfg.score_include_train) {
        entries.insert(entries.end(), splits.train.begin(), splits.train.end());
    }

    ensure_dir(cfg.output_dir, "output");
    std::vector<ScoredSequence> scored(entries.size());
    run_parallel(static_cast<int>(entries.size()), cfg.jobs, [&](int k) {
        const SequenceEntry& e = entries[k];
        scored[k] = score_sequence(models, e.id, e.label, load_sequence17(e.path),
                                   cfg.window.segment_len);
    });

    write_segment_scores(cfg.output_dir / "segments.csv", scored);
    write_sequence_scores(cfg.output_dir / "sequences.csv", scored);
}

namespace {

struct IndexSeries {
    std::string name;
    std::vector<ScoredSample> samples;
};

std::vector<IndexSeries> segment_series(const std::vector<SegmentScoreRow>& rows) {
    std::vector<IndexSeries> series = {{"x_axis", {}}, {"y_axis", {}}, {"z_axis", {}},
                                       {"non_weighted", {}}, {"weighted", {}}};
    for (const SegmentScoreRow& r : rows) {
        const int label = r.label == Label::Abnormal ? 1 : 0;
        series[0].samples.push_back({r.mse_x, label});
        series[1].samples.push_back({r.mse_y, label});
        series[2].samples.push_back({r.mse_z, label});
        series[3].samples.push_back({r.mse_x + r.mse_y + r.mse_z, label});
        series[4].samples.push_back({r.fused, label});
    }
    return series;
}

// Per-sequence indices are means of the per-segment values, grouped by
// sequence id in first-appearance order.
std::vector<IndexSeries> sequence_series(const std::vector<SegmentScoreRow>& rows,
                                         bool weighted_only = false) {
    struct Agg {
        double nw = 0.0, w = 0.0;
        long n = 0;
        int label = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Agg> by_id;
    for (const SegmentScoreRow& r : rows) {
        auto [it, inserted] = by_id.try_emplace(r.sequence_id);
        if (inserted) {
            order.push_back(r.sequence_id);
            it->second.label = r.label == Label::Abnormal ? 1 : 0;
        } else {
            require(it->second.label == (r.label == Label::Abnormal ? 1 : 0),
                    "cli: sequence " + r.sequence_id + " has inconsistent labels in the score file");
        }
        it->second.nw += r.mse_x + r.mse_y + r.mse_z;
        it->second.w += r.fused;
        it->second.n += 1;
    }
    std::vector<IndexSeries> series;
    if (!weighted_only) series.push_back({"non_weighted", {}});
    series.push_back({"weighted", {}});
    for (const std::string& id : order) {
        const Agg& a = by_id.at(id);
        size_t k = 0;
        if (!weighted_only) {
            series[k++].samples.push_back({a.nw / static_cast<double>(a.n), a.label});
        }
        series[k].samples.push_back({a.w / static_cast<double>(a.n), a.label});
    }
    return series;
}

json eval_row(const RunConfig& cfg, const std::string& granularity, const IndexSeries& s) {
    const RocResult r = roc(s.samples);
    const double threshold = cfg.eval_threshold.value_or(r.eer_threshold);
    const ConfusionMetrics cm = confusion_at(s.samples, threshold);

    long n_pos = 0, n_neg = 0;
    for (const auto& [v, label] : s.samples) (label ? n_pos : n_neg) += 1;

    json row;
    row["granularity"] = granularity;
    row["index"] = s.name;
    row["auc"] = r.auc;
    row["eer"] = r.eer;
    row["eer_threshold"] = r.eer_threshold;
    row["threshold"] = threshold;
    row["sensitivity"] = cm.sensitivity;
    row["specificity"] = cm.specificity;
    row["precision"] = cm.precision;
    row["accuracy"] = cm.accuracy;
    row["f1"] = cm.f1;
    row["n_pos"] = n_pos;
    row["n_neg"] = n_neg;
    if (!cm.undefined.empty()) row["undefined_metrics"] = cm.undefined;

    if (cfg.eval_write_roc) {
        const auto path = cfg.output_dir / ("roc_" + granularity + "_" + s.name + ".csv");
        std::ofstream out(path);
        if (!out) fail("cli: cannot write ROC file " + path.string());
        out << "fpr,tpr,threshold\n";
        for (const RocPoint& p : r.points) {
            out << format_double(p.fpr) << ',' << format_double(p.tpr) << ','
                << format_double(p.threshold) << '\n';
        }
    }
    return row;
}

}  // namespace

void cmd_eval(const RunConfig& cfg) {
    const auto rows = read_segment_scores(cfg.output_dir / "segments.csv");

    ensure_dir(cfg.output_dir, "output");
    json report;
    report["format_version"] = 1;
    report["positive_class"] = "abnormal";
    report["score_orientation"] = "higher index = more abnormal";
    report["threshold_policy"] = cfg.eval_threshold ? "fixed" : "eer";

    json out_rows = json::array();
    for (const IndexSeries& s : segment_series(rows)) {
        out_rows.push_back(eval_row(cfg, "per_segment", s));
    }
    std::vector<SegmentScoreRow> dropout_rows;
    if (!cfg.eval_dropout_scores.empty()) {
        dropout_rows = read_segment_scores(cfg.eval_dropout_scores);
        IndexSeries s{"weighted_dropout", {}};
        for (const SegmentScoreRow& r : dropout_rows) {
            s.samples.push_back({r.fused, r.label == Label::Abnormal ? 1 : 0});
        }
        out_rows.push_back(eval_row(cfg, "per_segment", s));
    }
    for (const IndexSeries& s : sequence_series(rows)) {
        out_rows.push_back(eval_row(cfg, "per_sequence", s));
    }
    if (!dropout_rows.empty()) {
        IndexSeries s = sequence_series(dropout_rows, /*weighted_only=*/true).front();
        s.name = "weighted_dropout";
        out_rows.push_back(eval_row(cfg, "per_sequence", s));
    }
    report["rows"] = std::move(out_rows);

    const auto path = cfg.output_dir / "report.json";
    std::ofstream out(path);
    if (!out) fail("cli: cannot write report " + path.string());
    out << report.dump(1) << '\n';
    if (!out) fail("cli: write failed for " + path.string());
}

void cmd_export_weights(const RunConfig& cfg) {
    ensure_dir(cfg.output_dir, "output");
    for (int k = 0; k < 3; ++k) {
        const AxisModel model =
            load_model(cfg.model_dir / (std::string("model_") + kAxisFileTag[k] + ".json"));
        const auto path = cfg.output_dir / (std::string("weights_") + kAxisFileTag[k] + ".csv");
        std::ofstream out(path);
        if (!out) fail("cli: cannot write weight export " + path.string());

        out << "gate,unit";
        for (int d = 0; d < model.input_dim(); ++d) out << ",w_" << d;
        out << '\n';
        const std::pair<const char*, const Eigen::MatrixXd*> gates[4] = {
            {"input", &model.encoder.w_ix},
            {"forget", &model.encoder.w_fx},
            {"candidate", &model.encoder.w_cx},
            {"output", &model.encoder.w_ox},
        };
        for (const auto& [gate, w] : gates) {
            for (int u = 0; u < model.hidden_dim(); ++u) {
                out << gate << ',' << u;
                for (int d = 0; d < model.input_dim(); ++d) {
                    out << ',' << format_double((*w)(u, d));
                }
                out << '\n';
            }
        }
        if (!out) fail("cli: write failed for " + path.string());
    }
}

}  // namespace gaitidx
