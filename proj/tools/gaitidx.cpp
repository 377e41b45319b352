#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gaitidx/commands.hpp"

using namespace gaitidx;

int main(int argc, char** argv) {
    CLI::App app{"Skeleton-sequence gait index estimation with per-axis LSTM autoencoders"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON config file (defaults apply when omitted)")
        ->envname("GAITIDX_CONFIG");

    // Overrides shared by all subcommands; explicit flags win over the file.
    uint64_t seed = 0;
    int jobs = 0;
    std::string dataset_dir, model_dir, output_dir;
    auto* seed_opt = app.add_option("--seed", seed, "root RNG seed");
    auto* jobs_opt = app.add_option("--jobs", jobs, "max parallel workers");
    auto* data_opt = app.add_option("--dataset-dir", dataset_dir, "dataset directory");
    auto* model_opt = app.add_option("--model-dir", model_dir, "model directory");
    auto* out_opt = app.add_option("--output-dir", output_dir, "output directory");

    auto* synth = app.add_subcommand("synth", "generate a synthetic gait dataset + manifest");
    int subjects = 0, train_subjects = 0, frames = 0;
    double noise = -1.0;
    auto* subj_opt = synth->add_option("--subjects", subjects, "number of subjects");
    auto* tsubj_opt = synth->add_option("--train-subjects", train_subjects, "subjects in the train split");
    auto* frames_opt = synth->add_option("--frames", frames, "frames per sequence");
    auto* noise_opt = synth->add_option("--noise", noise, "x/y sensor noise amplitude (meters)");

    auto* train = app.add_subcommand("train", "train the three axis models on normal training gait");
    int epochs = 0, batch_size = 0, hidden = 0;
    double lr = 0.0, dropout_keep = 0.0, grad_clip = -1.0;
    bool teacher_forcing = false;
    auto* epochs_opt = train->add_option("--epochs", epochs, "training epochs");
    auto* lr_opt = train->add_option("--lr", lr, "Adam learning rate");
    auto* batch_opt = train->add_option("--batch-size", batch_size, "mini-batch size");
    auto* hidden_opt = train->add_option("--hidden", hidden, "LSTM hidden units");
    auto* drop_opt = train->add_option("--dropout-keep", dropout_keep,
                                       "input-dropout retention probability (1.0 = off, 0.5 = paper setting)");
    auto* clip_opt = train->add_option("--grad-clip", grad_clip, "max gradient norm (0 = off)");
    auto* tf_flag = train->add_flag("--teacher-forcing", teacher_forcing,
                                    "feed ground-truth frames to the decoder while training");

    auto* score = app.add_subcommand("score", "score sequences through the trained model set");
    bool include_train = false;
    auto* inc_flag = score->add_flag("--include-train", include_train,
                                     "also score train-split sequences (off by default)");

    auto* eval = app.add_subcommand("eval", "compute ROC/AUC/EER and confusion metrics from scores");
    double threshold = 0.0;
    std::string dropout_scores;
    bool write_roc = false;
    auto* thr_opt = eval->add_option("--threshold", threshold,
                                     "fixed decision threshold (default: per-row EER threshold)");
    auto* dscore_opt = eval->add_option("--dropout-scores", dropout_scores,
                                        "segment score file from a dropout-trained run (adds the "
                                        "weighted_dropout rows)");
    auto* roc_flag = eval->add_flag("--roc", write_roc, "also write ROC point CSVs");

    auto* export_cmd = app.add_subcommand("export-weights",
                                          "export encoder input-connection weights per hidden unit");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = config_path.empty() ? default_run_config() : load_run_config(config_path);
        if (*seed_opt) {
            cfg.seed = seed;
            cfg.synth.seed = seed;
            cfg.train.seed = seed;
        }
        if (*jobs_opt) cfg.jobs = jobs;
        if (*data_opt) cfg.dataset_dir = dataset_dir;
        if (*model_opt) cfg.model_dir = model_dir;
        if (*out_opt) cfg.output_dir = output_dir;

        if (synth->parsed()) {
            if (*subj_opt) cfg.synth.subjects = subjects;
            if (*tsubj_opt) cfg.synth.train_subjects = train_subjects;
            if (*frames_opt) cfg.synth.frames = frames;
            if (*noise_opt) cfg.synth.noise_amplitude = noise;
            cmd_synth(cfg);
        } else if (train->parsed()) {
            if (*epochs_opt) cfg.train.epochs = epochs;
            if (*lr_opt) cfg.train.learning_rate = lr;
            if (*batch_opt) cfg.train.batch_size = batch_size;
            if (*hidden_opt) cfg.train.hidden_dim = hidden;
            if (*drop_opt) cfg.train.dropout_keep = dropout_keep;
            if (*clip_opt) cfg.train.grad_clip = grad_clip;
            if (*tf_flag) cfg.train.teacher_forcing = teacher_forcing;
            cmd_train(cfg);
        } else if (score->parsed()) {
            if (*inc_flag) cfg.score_include_train = include_train;
            cmd_score(cfg);
        } else if (eval->parsed()) {
            if (*thr_opt) cfg.eval_threshold = threshold;
            if (*dscore_opt) cfg.eval_dropout_scores = dropout_scores;
            if (*roc_flag) cfg.eval_write_roc = write_roc;
            cmd_eval(cfg);
        } else if (export_cmd->parsed()) {
            cmd_export_weights(cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
