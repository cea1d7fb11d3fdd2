#include <iostream>

#include <CLI11.hpp>

#include "mog/cli/commands.hpp"
#include "mog/text.hpp"

namespace {

int fail(const std::string& command, const std::exception& e) {
  std::cerr << "mog " << command << ": " << e.what() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mog::cli;
  CLI::App app{"Memory-organized article generation"};
  app.require_subcommand(1);

  std::vector<std::string> topics;
  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Collect, organize and write a cited article");
  generate->add_option("--topic", topics, "Article topic (repeat for several; each gets a subdirectory)")->required();
  generate->add_option("--config", gen.config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", gen.out, "Output directory");
  generate->add_flag("--no-subtopic-explorer", gen.no_subtopic_explorer, "Query the root topic only");
  generate->add_flag("--no-memory-organization", gen.no_memory_organization,
                     "Single-level outline from one heading pass");

  EvaluateOptions eval;
  std::string reference, evconfig, article_mentions, reference_mentions;
  auto* evaluate = app.add_subcommand("evaluate", "Score a generated article");
  evaluate->add_option("--article", eval.article, "Rendered article")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--sidecar", eval.sidecar, "Sidecar with per-sentence unit citations")->required();
  evaluate->add_option("--reference", reference, "Human-written reference article (plain text)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval.out, "Report path (JSON)")->required();
  evaluate->add_option("--config", evconfig, "Config supplying the judge backend")->check(CLI::ExistingFile);
  evaluate->add_option("--article-mentions", article_mentions, "External mentions for the article")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--reference-mentions", reference_mentions, "External mentions for the reference")
      ->check(CLI::ExistingFile);

  std::vector<std::string> report_paths;
  std::string aggregate_out;
  auto* aggregate = app.add_subcommand("aggregate", "Macro-average evaluation reports across topics");
  aggregate->add_option("--report", report_paths, "Per-topic evaluation report")->required()->check(CLI::ExistingFile);
  aggregate->add_option("--out", aggregate_out, "Output path (JSON); stdout when omitted");

  InspectOptions insp;
  std::string outline;
  auto* inspect = app.add_subcommand("inspect", "Print the label tree of a memory store");
  inspect->add_option("--store", insp.store, "Store file")->required();
  inspect->add_option("--outline", outline, "Outline JSON to print as well")->check(CLI::ExistingFile);
  inspect->add_flag("--units", insp.units, "List unit texts under each label");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) {
    try {
      if (gen.out.empty() && topics.size() > 1) throw std::runtime_error("--out is required with several topics");
      const auto base = gen.out;
      for (const auto& topic : topics) {
        gen.topic = topic;
        gen.out = topics.size() == 1 ? base : base / mog::text::slugify(topic);
        const GenerateResult r = run_generate(gen);
        std::cout << topic << ": " << r.units << " units from " << r.pages_fetched << " pages, " << r.sections
                  << " sections -> " << r.article.string() << "\n";
      }
    } catch (const std::exception& e) {
      return fail("generate", e);
    }
  } else if (evaluate->parsed()) {
    try {
      if (!reference.empty()) eval.reference = reference;
      if (!evconfig.empty()) eval.config = evconfig;
      if (!article_mentions.empty()) eval.article_mentions = article_mentions;
      if (!reference_mentions.empty()) eval.reference_mentions = reference_mentions;
      run_evaluate(eval);
      std::cout << "wrote " << eval.out.string() << "\n";
    } catch (const std::exception& e) {
      return fail("evaluate", e);
    }
  } else if (aggregate->parsed()) {
    try {
      std::vector<nlohmann::json> reports;
      for (const auto& p : report_paths) reports.push_back(nlohmann::json::parse(read_text_file(p)));
      const std::string text = aggregate_reports(reports).dump(2) + "\n";
      if (aggregate_out.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(aggregate_out, text);
      }
    } catch (const std::exception& e) {
      return fail("aggregate", e);
    }
  } else if (inspect->parsed()) {
    try {
      if (!outline.empty()) insp.outline = outline;
      run_inspect(insp, std::cout);
    } catch (const std::exception& e) {
      return fail("inspect", e);
    }
  }
  return 0;
}
