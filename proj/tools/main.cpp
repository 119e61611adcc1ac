#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace scrnn::cli;

namespace {

void add_config_options(CLI::App* cmd, ConfigSource& src, bool threads) {
  cmd->add_option("-c,--config", src.path, "JSON config file or run manifest");
  cmd->add_option("--set", src.overrides, "override a config key (key=value, repeatable)");
  if (threads) {
    cmd->add_option("--threads", src.threads, "worker threads for batch gradients")->check(CLI::PositiveNumber);
    cmd->add_flag("--deterministic", src.deterministic, "reduce gradients in batch-index order");
  }
}

int report(scrnn::ErrorCategory category, const std::string& message) {
  std::cerr << "error category=" << scrnn::to_string(category) << ": " << message << '\n';
  return exit_code(category);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeleton-joint co-attention motion prediction"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "train a model and write checkpoint, loss history and manifest");
  add_config_options(c_train, train.config, true);
  c_train->add_option("-d,--data", train.data, "directory of CSV sequences (or one CSV file)")->required();
  c_train->add_option("-o,--out", train.out_dir, "output directory")->required();

  PredictArgs predict;
  auto* c_predict = app.add_subcommand("predict", "roll a checkpoint forward from an observed CSV");
  c_predict->add_option("--checkpoint", predict.checkpoint)->required();
  c_predict->add_option("-i,--input", predict.input, "observed frames CSV")->required();
  c_predict->add_option("--horizon", predict.horizon, "frames to predict (default: config horizon)");
  c_predict->add_option("-o,--out", predict.out, "output CSV (default: stdout)");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "mean angle error table of a prediction against ground truth");
  c_eval->add_option("--pred", eval.pred)->required();
  c_eval->add_option("--truth", eval.truth)->required();
  c_eval->add_option("--horizons-ms", eval.horizons_ms, "horizons in milliseconds")->delimiter(',');
  c_eval->add_option("--frame-interval-ms", eval.frame_interval_ms)->check(CLI::PositiveNumber);
  c_eval->add_option("--tag", eval.tag, "row label");
  c_eval->add_option("--csv", eval.csv_out, "also write the table as CSV");
  c_eval->add_option("--precision", eval.precision, "markdown decimals");

  GradCheckArgs gradcheck;
  auto* c_grad = app.add_subcommand("gradcheck", "compare analytic gradients with central differences");
  add_config_options(c_grad, gradcheck.config, false);
  c_grad->add_option("--seed", gradcheck.seed, "instance seed");

  AblateArgs ablate;
  auto* c_ablate = app.add_subcommand("ablate", "train all four variants and tabulate validation MAE");
  add_config_options(c_ablate, ablate.config, true);
  c_ablate->add_option("-d,--data", ablate.data, "CSV data (default: synthetic from config)");
  c_ablate->add_option("--markdown", ablate.markdown_out, "write the table as markdown");
  c_ablate->add_option("--csv", ablate.csv_out, "write the table as CSV");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate synthetic sequences as CSV");
  add_config_options(c_synth, synth.config, false);
  c_synth->add_option("-o,--out", synth.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(scrnn::ErrorCategory::argument, e.what());
  }

  try {
    if (*c_train) return cmd_train(train, std::cout);
    if (*c_predict) return cmd_predict(predict, std::cout);
    if (*c_eval) return cmd_eval(eval, std::cout);
    if (*c_grad) return cmd_gradcheck(gradcheck, std::cout);
    if (*c_ablate) return cmd_ablate(ablate, std::cout);
    if (*c_synth) return cmd_synth(synth, std::cout);
  } catch (const scrnn::Error& e) {
    return report(e.category(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(scrnn::ErrorCategory::data, e.what());
  } catch (const std::exception& e) {
    return report(scrnn::ErrorCategory::internal, e.what());
  }
  return report(scrnn::ErrorCategory::internal, "no command ran");
}
