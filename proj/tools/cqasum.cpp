// cqasum: stage-by-stage or end-to-end runs of the perspective
// classification + summarization pipeline. Every subcommand reads one config
// file, persists its artifacts into the configured output directory, and
// skips work that is already up to date.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cqasum/config.hpp"
#include "cqasum/error.hpp"
#include "cqasum/pipeline.hpp"

namespace {

enum class Command {
    Ingest,
    ApplyRules,
    TrainLabelModel,
    TrainSvm,
    Classify,
    Summarize,
    Evaluate,
    RunAll,
};

struct Args {
    Command command = Command::RunAll;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> epochs;
};

CLI::App* add_command(CLI::App& app, Args& args, Command command, const std::string& name,
                      const std::string& description) {
    CLI::App* cmd = app.add_subcommand(name, description);
    cmd->add_option("--config", args.config_path, "run configuration file (TOML)")
        ->required()
        ->option_text("PATH");
    cmd->add_option("--seed", args.seed, "override every configured seed")->option_text("N");
    cmd->callback([&args, command]() { args.command = command; });
    return cmd;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakly-supervised perspective classification and summarization pipeline"};
    app.require_subcommand(1);
    Args args;

    add_command(app, args, Command::Ingest, "ingest",
                "load, validate, and normalize the corpus; split answers into sentences");
    add_command(app, args, Command::ApplyRules, "apply-rules",
                "run the labeling rules over all sentences into a vote matrix");
    CLI::App* tlm = add_command(app, args, Command::TrainLabelModel, "train-label-model",
                                "fit the generative label model on the vote matrix");
    tlm->add_option("--epochs", args.epochs, "override label-model training epochs")
        ->option_text("N");
    add_command(app, args, Command::TrainSvm, "train-svm",
                "train the one-vs-rest linear classifier on sentence embeddings");
    add_command(app, args, Command::Classify, "classify",
                "run the rule/SVM/zero-shot cascade and merge sentences into spans");
    add_command(app, args, Command::Summarize, "summarize",
                "produce per-perspective extractive and abstractive summaries");
    add_command(app, args, Command::Evaluate, "evaluate",
                "score predictions and summaries against gold; write the report");
    add_command(app, args, Command::RunAll, "run-all", "execute every stage in order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // bad flags are configuration errors
    }

    try {
        cqasum::PipelineConfig cfg = cqasum::load_pipeline_config(args.config_path);
        if (args.seed) cqasum::apply_seed_override(cfg, *args.seed);
        if (args.epochs) {
            if (*args.epochs < 1) cqasum::throw_config("--epochs must be >= 1");
            cfg.label_model.epochs = *args.epochs;
        }
        cqasum::Pipeline pipeline(std::move(cfg));
        switch (args.command) {
            case Command::Ingest: pipeline.ingest(); break;
            case Command::ApplyRules: pipeline.apply_rules(); break;
            case Command::TrainLabelModel: pipeline.train_label_model(); break;
            case Command::TrainSvm: pipeline.train_svm(); break;
            case Command::Classify: pipeline.classify(); break;
            case Command::Summarize: pipeline.summarize(); break;
            case Command::Evaluate: pipeline.evaluate(); break;
            case Command::RunAll: pipeline.run_all(); break;
        }
        return 0;
    } catch (const cqasum::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return static_cast<int>(cqasum::ErrorKind::Internal);
    }
}
