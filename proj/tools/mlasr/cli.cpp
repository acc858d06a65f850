// Copyright 2026 The mlasr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mlasr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlasr/audioprep.hpp"
#include "mlasr/corpus.hpp"
#include "mlasr/decoder.hpp"
#include "mlasr/error.hpp"
#include "mlasr/json_config.hpp"
#include "mlasr/lid.hpp"
#include "mlasr/lm.hpp"
#include "mlasr/metrics.hpp"
#include "mlasr/pipeline.hpp"
#include "mlasr/rng.hpp"
#include "mlasr/simulate.hpp"
#include "mlasr/textnorm.hpp"
#include "mlasr/unicode.hpp"
#include "mlasr/vocab.hpp"

namespace mlasr::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    pos = end + 1;
  }
  return lines;
}

std::vector<std::string> read_lines(const fs::path& p) { return split_lines(read_file(p)); }

std::vector<std::string> non_blank(std::vector<std::string> lines) {
  std::erase_if(lines, [](const std::string& l) { return l.find_first_not_of(" \t") == std::string::npos; });
  return lines;
}

fs::path make_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::pair<std::string, std::string> split_assignment(const std::string& s, std::string_view what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    throw DataError(std::string(what) + " expects KEY=VALUE, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

VocabRegistry load_registry(const std::vector<std::string>& paths, const std::vector<std::string>& relabel = {}) {
  std::vector<Vocab> vocabs;
  for (const auto& p : paths) vocabs.push_back(load_vocab(p));
  std::map<LanguageId, LanguageId> map;
  for (const auto& r : relabel) {
    auto [from, to] = split_assignment(r, "--relabel");
    map.emplace(LanguageId(from), LanguageId(to));
  }
  return VocabRegistry(std::move(vocabs), std::move(map));
}

std::string char_list(const std::set<char32_t>& s) {
  std::string out;
  for (char32_t c : s) {
    if (!out.empty()) out += ' ';
    out += unicode::codepoint_label(c);
  }
  return out;
}

ojson char_array(const std::set<char32_t>& s) {
  ojson a = ojson::array();
  for (char32_t c : s) a.push_back(unicode::encode(c));
  return a;
}

struct Cli {
  CLI::App app{"Multilingual ASR toolkit: corpus prep, script LID, WER/T-WER, n-gram LMs, audio prep"};
  std::ostream& out;
  std::ostream& err;
  int jobs = 1;
  std::map<const CLI::App*, std::function<void()>> actions;

  Cli(std::ostream& o, std::ostream& e) : out(o), err(e) {}

  void on(CLI::App* sub, std::function<void()> fn) { actions[sub] = std::move(fn); }

  void write_report(const fs::path& dir, const std::string& result_json, const std::string& name = "report.json") {
    ojson j;
    std::string command = "mlasr";
    for (const auto& s : active_path(app)) command += " " + s;
    j["command"] = command;
    j["config"] = ojson::parse(resolved_config_json(app));
    j["result"] = ojson::parse(result_json);
    write_file(dir / name, j.dump(2) + "\n");
  }

  void setup();
  void setup_clean();
  void setup_vocab();
  void setup_lid();
  void setup_wer();
  void setup_lm();
  void setup_audio();
  void setup_run();
};

void Cli::setup() {
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);  // a typo in a config key is a usage error
  app.set_config("--config", "", "JSON file whose keys mirror long flag names; flags given on the command line win");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.add_option("--jobs,-j", jobs, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  setup_clean();
  setup_vocab();
  setup_lid();
  setup_wer();
  setup_lm();
  setup_audio();
  setup_run();
}

void Cli::setup_clean() {
  struct Opts {
    std::string manifest, rules, out;
    std::vector<std::string> vocabs;
    std::uint64_t rare = kDefaultRareThreshold;
    bool no_rare = false;
    bool lowercase = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("clean", "Normalize transcripts and drop rare symbols");
  sub->add_option("--manifest", o->manifest, "Input manifest (JSONL)")->required()->check(CLI::ExistingFile);
  sub->add_option("--rules", o->rules, "Cleaning rules JSON (default: Unicode punctuation, apostrophe and hyphen kept)")
      ->check(CLI::ExistingFile);
  sub->add_option("--rare-threshold", o->rare, "Drop symbols seen fewer times than this in the train split")
      ->capture_default_str();
  sub->add_flag("--no-rare-filter", o->no_rare, "Skip rare-symbol filtering");
  sub->add_flag("--lowercase-latin", o->lowercase, "Lowercase Latin-script letters");
  sub->add_option("--vocab", o->vocabs, "Vocab files; rules that would remove one of their symbols are rejected");
  sub->add_option("--out", o->out, "Output directory")->required();
  on(sub, [this, o] {
    CleaningRules rules = o->rules.empty() ? CleaningRules::defaults() : CleaningRules::from_json(read_file(o->rules));
    if (o->lowercase) rules.lowercase_latin = true;
    if (!o->vocabs.empty()) check_cleaning_rules(rules, load_registry(o->vocabs));
    const Manifest in = load_manifest(o->manifest);
    Manifest cleaned = clean_manifest(in, rules);
    std::map<char32_t, std::uint64_t> removed;
    if (!o->no_rare) {
      auto r = rare_symbol_filter(cleaned, o->rare);
      cleaned = std::move(r.manifest);
      removed = std::move(r.removed);
    }
    const fs::path dir = make_out(o->out);
    write_manifest(cleaned, dir / "manifest.jsonl");
    write_file(dir / "removed_symbols.tsv", format_removed_report(removed));
    ojson res;
    res["utterances"] = cleaned.size();
    res["rules"] = ojson::parse(rules.to_json());
    ojson rm = ojson::object();
    for (const auto& [c, n] : removed) rm[unicode::codepoint_label(c)] = n;
    res["removed_symbols"] = rm;
    ojson stats = ojson::object();
    for (const auto& [lang, s] : manifest_stats(cleaned)) {
      stats[lang] = {{"count", s.count}, {"total_duration_hrs", s.total_duration_hrs}};
    }
    res["stats"] = stats;
    write_report(dir, res.dump());
    out << "cleaned " << cleaned.size() << " utterances; removed " << removed.size() << " rare symbols\n";
  });
}

void Cli::setup_vocab() {
  auto* vocab = app.add_subcommand("vocab", "Build, compare and merge per-language character vocabularies");
  vocab->require_subcommand(1);

  {
    struct Opts {
      std::string manifest, out, split;
      std::vector<std::string> langs;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = vocab->add_subcommand("build", "One vocab per language from a labeled manifest");
    sub->add_option("--manifest", o->manifest, "Cleaned manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("--lang", o->langs, "Languages to build (default: every labeled language)");
    sub->add_option("--split", o->split, "Only use utterances of this split");
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      Manifest m = load_manifest(o->manifest);
      if (!o->split.empty()) {
        std::vector<Utterance> keep;
        for (const auto& u : m.entries()) {
          if (u.split == o->split) keep.push_back(u);
        }
        m = Manifest(std::move(keep), m.metadata());
      }
      std::set<LanguageId> langs;
      for (const auto& l : o->langs) langs.emplace(l);
      if (langs.empty()) {
        for (const auto& u : m.entries()) {
          if (u.language) langs.insert(*u.language);
        }
      }
      if (langs.empty()) throw DataError("no labeled utterances to build vocabs from");
      const fs::path dir = make_out(o->out);
      ojson res = ojson::object();
      for (const auto& l : langs) {
        const Vocab v = build_vocab(m, l);
        write_vocab(v, dir / (l.str() + ".vocab"));
        res[l.str()] = v.size();
        out << l.str() << "\t" << v.size() << "\n";
      }
      write_report(dir, ojson{{"sizes", res}}.dump());
    });
  }
  {
    struct Opts {
      std::vector<std::string> vocabs;
      std::string name, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = vocab->add_subcommand("union", "Union of several vocabs");
    sub->add_option("--vocab", o->vocabs, "Input vocab files")->required()->check(CLI::ExistingFile);
    sub->add_option("--name", o->name, "Language id of the result")->required();
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      std::vector<Vocab> vs;
      for (const auto& p : o->vocabs) vs.push_back(load_vocab(p));
      const Vocab u = vocab_union(vs, LanguageId(o->name));
      const fs::path dir = make_out(o->out);
      write_vocab(u, dir / (o->name + ".vocab"));
      out << o->name << "\t" << u.size() << "\n";
    });
  }
  {
    struct Opts {
      std::string a, b, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = vocab->add_subcommand("diff", "Symbols unique to each of two vocabs");
    sub->add_option("a", o->a, "First vocab")->required()->check(CLI::ExistingFile);
    sub->add_option("b", o->b, "Second vocab")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o->out, "Optional output directory for diff.json");
    on(sub, [this, o] {
      const Vocab a = load_vocab(o->a);
      const Vocab b = load_vocab(o->b);
      const VocabDiff d = vocab_diff(a, b);
      out << "only_" << a.language.str() << "\t" << d.only_a.size() << "\t" << char_list(d.only_a) << "\n";
      out << "only_" << b.language.str() << "\t" << d.only_b.size() << "\t" << char_list(d.only_b) << "\n";
      out << "shared\t" << d.shared.size() << "\n";
      out << "symmetric_difference\t" << d.symmetric_size() << "\n";
      if (!o->out.empty()) {
        ojson res;
        res["a"] = a.language.str();
        res["b"] = b.language.str();
        res["only_a"] = char_array(d.only_a);
        res["only_b"] = char_array(d.only_b);
        res["shared"] = d.shared.size();
        res["symmetric_difference"] = d.symmetric_size();
        write_report(make_out(o->out), res.dump());
      }
    });
  }
  {
    struct Opts {
      std::vector<std::string> vocabs;
      std::size_t max_sym_diff = kDefaultMaxSymDiff;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = vocab->add_subcommand("propose", "List language pairs whose vocabs nearly coincide");
    sub->add_option("--vocab", o->vocabs, "Vocab files")->required()->check(CLI::ExistingFile);
    sub->add_option("--max-sym-diff", o->max_sym_diff, "Largest symmetric difference to propose")->capture_default_str();
    sub->add_option("--out", o->out, "Optional output directory");
    on(sub, [this, o] {
      const auto cands = propose_mergers(load_registry(o->vocabs), o->max_sym_diff);
      ojson res = ojson::array();
      for (const auto& c : cands) {
        out << c.a.str() << "\t" << c.b.str() << "\t" << c.sym_diff << "\n";
        res.push_back({{"a", c.a.str()}, {"b", c.b.str()}, {"sym_diff", c.sym_diff}});
      }
      if (!o->out.empty()) write_report(make_out(o->out), ojson{{"candidates", res}}.dump());
    });
  }
  {
    struct Opts {
      std::vector<std::string> vocabs;
      std::string a, b, name, manifest, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = vocab->add_subcommand("merge", "Merge two languages into one vocab and relabel");
    sub->add_option("--vocab", o->vocabs, "Vocab files of every language")->required()->check(CLI::ExistingFile);
    sub->add_option("--a", o->a, "First language")->required();
    sub->add_option("--b", o->b, "Second language")->required();
    sub->add_option("--name", o->name, "Merged language id")->required();
    sub->add_option("--manifest", o->manifest, "Manifest to relabel")->check(CLI::ExistingFile);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      const VocabRegistry merged =
          merge_languages(load_registry(o->vocabs), LanguageId(o->a), LanguageId(o->b), LanguageId(o->name));
      const fs::path dir = make_out(o->out);
      ojson sizes = ojson::object();
      for (const auto& [id, v] : merged.vocabs()) {
        write_vocab(v, dir / (id.str() + ".vocab"));
        sizes[id.str()] = v.size();
      }
      std::string mapping;
      ojson relabel = ojson::object();
      for (const auto& [from, to] : merged.relabel_map()) {
        mapping += from.str() + "\t" + to.str() + "\n";
        relabel[from.str()] = to.str();
      }
      write_file(dir / "relabel.tsv", mapping);
      if (!o->manifest.empty()) write_manifest(merged.relabel(load_manifest(o->manifest)), dir / "manifest.jsonl");
      write_report(dir, ojson{{"sizes", sizes}, {"relabel", relabel}}.dump());
      out << "merged " << o->a << " + " << o->b << " -> " << o->name << " (" << merged.at(LanguageId(o->name)).size()
          << " symbols)\n";
    });
  }
}

struct PolicyOpts {
  std::string policy;
  bool keep_shared = false;
  std::vector<std::string> tie_break;
  std::string fallback;
  std::size_t min_votes = 0;
  std::vector<std::string> relabel;

  void add(CLI::App* sub) {
    sub->add_option("--policy", policy, "LID policy JSON")->check(CLI::ExistingFile);
    sub->add_flag("--keep-shared", keep_shared, "Let symbols owned by several vocabs vote for each owner");
    sub->add_option("--tie-break", tie_break, "Tie-break order, every language once (default: sorted ids)")
        ->delimiter(',');
    sub->add_option("--fallback", fallback, "Language for utterances without enough voting symbols");
    sub->add_option("--min-votes", min_votes, "Minimum number of voting symbols (default 1)");
    sub->add_option("--relabel", relabel, "Gold label mapping FROM=TO, e.g. after a merge");
  }

  LidPolicy resolve(const VocabRegistry& reg) const {
    LidPolicy p = policy.empty() ? LidPolicy::for_registry(reg) : LidPolicy::from_json(read_file(policy), reg);
    if (keep_shared) p.ignore_shared = false;
    if (!tie_break.empty()) {
      p.tie_break_order.clear();
      for (const auto& t : tie_break) p.tie_break_order.emplace_back(t);
    }
    if (!fallback.empty()) p.fallback = LanguageId(fallback);
    if (min_votes > 0) p.min_votes = min_votes;
    p.validate(reg);
    return p;
  }
};

void Cli::setup_lid() {
  struct Opts {
    std::string manifest, hyp, out;
    std::vector<std::string> vocabs;
    PolicyOpts policy;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lid", "Script-based language identification by per-character voting");
  sub->add_option("--manifest", o->manifest, "Manifest; gold labels, when present, fill a confusion matrix")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--vocab", o->vocabs, "Vocab file per language")->required()->check(CLI::ExistingFile);
  sub->add_option("--hyp", o->hyp, "Classify these decoded hypotheses (TSV or JSONL) instead of manifest text")
      ->check(CLI::ExistingFile);
  o->policy.add(sub);
  sub->add_option("--out", o->out, "Output directory")->required();
  on(sub, [this, o] {
    const VocabRegistry reg = load_registry(o->vocabs, o->policy.relabel);
    const LidPolicy policy = o->policy.resolve(reg);
    Manifest m = reg.relabel(load_manifest(o->manifest));
    if (!o->hyp.empty()) {
      const ReplayDecoder dec = ReplayDecoder::load(o->hyp);
      m = m.transformed([&](Utterance& u) { u.text = dec.decode(u); });
    }
    const BatchLidResult r = batch_identify(m, reg, policy, jobs);
    const fs::path dir = make_out(o->out);
    write_file(dir / "lid.tsv", format_lid_tsv(r.labels));
    write_manifest(r.labeled, dir / "labeled.jsonl");
    ojson res;
    res["policy"] = ojson::parse(policy.to_json());
    res["utterances"] = r.labels.size();
    if (r.confusion) {
      res["confusion"] = ojson::parse(r.confusion->to_json());
      out << "accuracy " << r.confusion->correct << "/" << r.confusion->total << "\n";
    }
    write_report(dir, res.dump());
    out << "labeled " << r.labels.size() << " utterances\n";
  });
}

void Cli::setup_wer() {
  struct Opts {
    std::string ref, hyp, table, out;
    bool utt_ids = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("wer", "WER, and T-WER when a transliteration table is given");
  sub->add_option("--ref", o->ref, "Reference transcripts, one per line")->required()->check(CLI::ExistingFile);
  sub->add_option("--hyp", o->hyp, "Hypotheses, one per line")->required()->check(CLI::ExistingFile);
  sub->add_option("--translit-table", o->table, "TSV of equivalent Latin/native word pairs")->check(CLI::ExistingFile);
  sub->add_flag("--utt-ids", o->utt_ids, "Lines start with an utterance id; pair by id instead of by line");
  sub->add_option("--out", o->out, "Optional output directory");
  on(sub, [this, o] {
    std::vector<ScoredPair> pairs;
    if (o->utt_ids) {
      auto keyed = [](const std::string& path) {
        std::map<std::string, std::string> m;
        for (const auto& line : non_blank(read_lines(path))) {
          const auto sp = line.find_first_of(" \t");
          std::string id = line.substr(0, sp);
          std::string text = sp == std::string::npos ? std::string() : line.substr(sp + 1);
          if (!m.emplace(id, text).second) throw DataError("duplicate utterance id '" + id + "' in '" + path + "'");
        }
        return m;
      };
      const auto refs = keyed(o->ref);
      const auto hyps = keyed(o->hyp);
      for (const auto& [id, text] : refs) {
        auto it = hyps.find(id);
        if (it == hyps.end()) throw DataError("no hypothesis for utterance '" + id + "'");
        pairs.push_back({"all", tokenize(text), tokenize(it->second)});
      }
    } else {
      const auto refs = read_lines(o->ref);
      auto hyps = read_lines(o->hyp);
      // A final newline does not add a line, but an empty hypothesis line is kept.
      if (hyps.size() < refs.size()) hyps.resize(refs.size());
      if (hyps.size() > refs.size()) {
        throw DataError("hypothesis file has " + std::to_string(hyps.size()) + " lines, reference has " +
                        std::to_string(refs.size()));
      }
      for (std::size_t i = 0; i < refs.size(); ++i) pairs.push_back({"all", tokenize(refs[i]), tokenize(hyps[i])});
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].ref.empty()) throw DataError("reference " + std::to_string(i + 1) + " is empty");
    }
    const CorpusWer w = corpus_wer(pairs, nullptr, jobs);
    out << format_wer_line("WER", w.pooled) << "\n";
    ojson res;
    res["wer"] = ojson::parse(w.to_json());
    if (!o->table.empty()) {
      const TransliterationTable table = TransliterationTable::load(o->table);
      const CorpusWer t = corpus_wer(pairs, &table, jobs);
      out << format_wer_line("T-WER", t.pooled) << "\n";
      res["t_wer"] = ojson::parse(t.to_json());
    }
    if (!o->out.empty()) write_report(make_out(o->out), res.dump());
  });
}

lm::Lexicon lexicon_from(const std::string& path, const std::vector<std::string>& corpus, std::size_t k) {
  if (!path.empty()) return lm::Lexicon::parse(read_file(path), path);
  return lm::build_lexicon(corpus, k);
}

std::vector<std::string> read_corpus(const std::string& path) { return non_blank(read_lines(path)); }

void Cli::setup_lm() {
  auto* lmc = app.add_subcommand("lm", "Word n-gram language models (interpolated Kneser-Ney)");
  lmc->require_subcommand(1);
  {
    struct Opts {
      std::string corpus, vocab, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = lmc->add_subcommand("clean", "Drop sentences with symbols outside the language vocab");
    sub->add_option("--corpus", o->corpus, "Text corpus, one sentence per line")->required()->check(CLI::ExistingFile);
    sub->add_option("--vocab", o->vocab, "Vocab of the language")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      const auto in = read_corpus(o->corpus);
      const auto kept = lm::clean_lm_corpus(in, load_vocab(o->vocab));
      std::string text;
      for (const auto& s : kept) text += s + "\n";
      const fs::path dir = make_out(o->out);
      write_file(dir / "corpus.txt", text);
      write_report(dir, ojson{{"input_sentences", in.size()}, {"kept_sentences", kept.size()}}.dump());
      out << "kept " << kept.size() << " of " << in.size() << " sentences\n";
    });
  }
  {
    struct Opts {
      std::string corpus, out;
      std::size_t top_k = lm::kDefaultLexiconSize;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = lmc->add_subcommand("lexicon", "Most frequent words of a corpus");
    sub->add_option("--corpus", o->corpus, "Cleaned corpus")->required()->check(CLI::ExistingFile);
    sub->add_option("--top-k", o->top_k, "Lexicon size")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      const auto lex = lm::build_lexicon(read_corpus(o->corpus), o->top_k);
      const fs::path dir = make_out(o->out);
      write_file(dir / "lexicon.tsv", lex.serialize());
      out << "lexicon " << lex.size() << " words\n";
    });
  }
  struct TrainOpts {
    std::string corpus, lexicon, out;
    std::size_t top_k = lm::kDefaultLexiconSize;
    int order = lm::kMaxOrder;
    std::vector<std::uint64_t> min_counts;
  };
  auto add_train = [](CLI::App* sub, TrainOpts& o) {
    sub->add_option("--corpus", o.corpus, "Cleaned corpus")->required()->check(CLI::ExistingFile);
    sub->add_option("--lexicon", o.lexicon, "Lexicon TSV (default: top-k words of the corpus)")->check(CLI::ExistingFile);
    sub->add_option("--top-k", o.top_k, "Lexicon size when no lexicon file is given")->capture_default_str();
    sub->add_option("--order", o.order, "N-gram order")->capture_default_str()->check(CLI::Range(1, lm::kMaxOrder));
    sub->add_option("--out", o.out, "Output directory")->required();
  };
  auto train = [](const TrainOpts& o) {
    const auto corpus = read_corpus(o.corpus);
    return lm::train_ngram(corpus, o.order, lexicon_from(o.lexicon, corpus, o.top_k));
  };
  auto summary = [](const lm::NGramModel& m) {
    ojson c = ojson::object();
    for (int n = 1; n <= m.order(); ++n) c["ngram " + std::to_string(n)] = m.ngram_count(n);
    return c;
  };
  {
    auto o = std::make_shared<TrainOpts>();
    auto* sub = lmc->add_subcommand("train", "Train an ARPA model");
    add_train(sub, *o);
    on(sub, [this, o, train, summary] {
      const auto model = train(*o);
      const fs::path dir = make_out(o->out);
      model.write_arpa(dir / "model.arpa");
      write_report(dir, ojson{{"counts", summary(model)}}.dump());
      out << "wrote " << (dir / "model.arpa").string() << "\n";
    });
  }
  {
    auto o = std::make_shared<TrainOpts>();
    auto* sub = lmc->add_subcommand("prune", "Train with count thresholds per order");
    add_train(sub, *o);
    sub->add_option("--min-counts", o->min_counts, "Thresholds per order, e.g. 1,1,2,2,3")
        ->required()
        ->delimiter(',');
    on(sub, [this, o, train, summary] {
      const auto full = train(*o);
      const auto model = lm::prune_ngram(full, o->min_counts);
      const fs::path dir = make_out(o->out);
      model.write_arpa(dir / "model.arpa");
      write_report(dir, ojson{{"unpruned", summary(full)}, {"pruned", summary(model)}}.dump());
      out << "wrote " << (dir / "model.arpa").string() << "\n";
    });
  }
  {
    struct Opts {
      std::string arpa, text, out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = lmc->add_subcommand("score", "Log10 probability of each sentence and corpus perplexity");
    sub->add_option("--arpa", o->arpa, "ARPA model")->required()->check(CLI::ExistingFile);
    sub->add_option("--text", o->text, "Sentences, one per line")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o->out, "Optional output directory");
    on(sub, [this, o] {
      const auto model = lm::NGramModel::load_arpa(o->arpa);
      std::vector<std::vector<std::string>> sents;
      ojson scores = ojson::array();
      for (const auto& line : read_corpus(o->text)) {
        sents.push_back(tokenize(line));
        const double s = model.score(sents.back());
        scores.push_back(s);
        out << s << "\t" << line << "\n";
      }
      const double ppl = lm::perplexity(model, sents);
      out << "perplexity " << ppl << "\n";
      if (!o->out.empty()) write_report(make_out(o->out), ojson{{"scores", scores}, {"perplexity", ppl}}.dump());
    });
  }
  {
    struct Opts {
      std::string arpa, nbest, out;
      lm::RescoreConfig cfg;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = lmc->add_subcommand("rescore", "Pick the best of each n-best list with LM fusion");
    sub->add_option("--arpa", o->arpa, "ARPA model")->required()->check(CLI::ExistingFile);
    sub->add_option("--nbest", o->nbest, "JSONL lines of {utt_id, nbest: [{text, score}]}")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--alpha", o->cfg.alpha, "LM weight")->capture_default_str();
    sub->add_option("--beta", o->cfg.beta, "Word insertion bonus")->capture_default_str();
    sub->add_option("--beam", o->cfg.beam, "Hypotheses kept per utterance")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      const auto model = lm::NGramModel::load_arpa(o->arpa);
      std::string tsv;
      ojson picks = ojson::array();
      std::size_t line_no = 0;
      for (const auto& line : read_lines(o->nbest)) {
        ++line_no;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<lm::Hypothesis> hyps;
        std::string id;
        try {
          const auto j = nlohmann::json::parse(line);
          id = j.at("utt_id").get<std::string>();
          for (const auto& e : j.at("nbest")) {
            hyps.push_back({id, unicode::nfc(e.at("text").get<std::string>()), e.value("score", 0.0)});
          }
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(o->nbest + ":" + std::to_string(line_no) + ": " + e.what());
        }
        const auto best = lm::rescore_nbest(hyps, model, o->cfg);
        tsv += id + "\t" + best.hypothesis.text + "\n";
        picks.push_back({{"utt_id", id},
                         {"index", best.index},
                         {"text", best.hypothesis.text},
                         {"lm_score", best.lm_score},
                         {"total_score", best.total_score}});
      }
      const fs::path dir = make_out(o->out);
      write_file(dir / "best.tsv", tsv);
      write_report(dir, ojson{{"picks", picks}}.dump());
      out << "rescored " << picks.size() << " utterances\n";
    });
  }
}

void Cli::setup_audio() {
  auto* audio = app.add_subcommand("audio", "Resampling, loudness normalization and augmentation");
  audio->require_subcommand(1);
  auto out_name = [](const fs::path& dir, const std::string& in, std::set<std::string>& seen) {
    std::string name = fs::path(in).stem().string() + ".wav";
    if (!seen.insert(name).second) throw DataError("two inputs map to output '" + name + "'");
    return dir / name;
  };
  {
    struct Opts {
      std::vector<std::string> inputs;
      int rate = 16000;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = audio->add_subcommand("resample", "Resample WAV files (8 kHz input to 16 kHz by default)");
    sub->add_option("--in", o->inputs, "Input WAV files")->required()->check(CLI::ExistingFile);
    sub->add_option("--rate", o->rate, "Target sample rate")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, out_name] {
      const fs::path dir = make_out(o->out);
      std::set<std::string> seen;
      ojson res = ojson::array();
      for (const auto& in : o->inputs) {
        const auto buf = audio::read_wav(in);
        audio::AudioBuffer r;
        if (buf.sample_rate_hz * 2 == o->rate) {
          r = audio::resample_2x(buf);
        } else {
          r.samples = audio::resample(buf.samples, buf.sample_rate_hz, o->rate);
          r.sample_rate_hz = o->rate;
        }
        const fs::path dst = out_name(dir, in, seen);
        audio::write_wav(r, dst);
        res.push_back({{"input", in}, {"output", dst.string()}, {"from_hz", buf.sample_rate_hz}, {"to_hz", o->rate}});
      }
      write_report(dir, ojson{{"files", res}}.dump());
      out << "resampled " << o->inputs.size() << " files\n";
    });
  }
  {
    struct Opts {
      std::vector<std::string> inputs;
      double target = audio::kDefaultTargetDbfs;
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = audio->add_subcommand("normalize", "Scale to a target RMS level");
    sub->add_option("--in", o->inputs, "Input WAV files")->required()->check(CLI::ExistingFile);
    sub->add_option("--target-dbfs", o->target, "Target RMS in dBFS")->capture_default_str();
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, out_name] {
      const fs::path dir = make_out(o->out);
      std::set<std::string> seen;
      ojson res = ojson::array();
      for (const auto& in : o->inputs) {
        const auto r = audio::loudness_normalize(audio::read_wav(in), o->target);
        const fs::path dst = out_name(dir, in, seen);
        audio::write_wav(r.buffer, dst);
        res.push_back({{"input", in}, {"output", dst.string()}, {"gain_db", r.gain_db}, {"clip_fraction", r.clip_fraction}});
        if (r.clip_fraction > 0) err << "warning: " << in << ": " << r.clip_fraction * 100 << "% of samples clipped\n";
      }
      write_report(dir, ojson{{"files", res}}.dump());
      out << "normalized " << o->inputs.size() << " files\n";
    });
  }
  {
    struct Opts {
      std::string manifest, specs, audio_root, out;
      std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = audio->add_subcommand("augment", "Add two perturbed copies of every utterance");
    sub->add_option("--manifest", o->manifest, "Manifest with audio paths")->required()->check(CLI::ExistingFile);
    sub->add_option("--specs", o->specs, "JSON array of two {gain_db, snr_db, pace_factor, pitch_semitones, seed}")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o->seed, "Seed for the default specs")->capture_default_str();
    sub->add_option("--audio-root", o->audio_root, "Directory relative audio paths are resolved against");
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o] {
      std::vector<audio::AugmentSpec> specs;
      if (o->specs.empty()) {
        specs = {{3.0, 30.0, 1.1, 1.0, derive_seed(o->seed, "aug1")}, {-3.0, 20.0, 0.9, -1.0, derive_seed(o->seed, "aug2")}};
      } else {
        try {
          const auto j = nlohmann::json::parse(read_file(o->specs));
          for (const auto& s : j) {
            audio::AugmentSpec a;
            a.gain_db = s.value("gain_db", a.gain_db);
            a.snr_db = s.value("snr_db", a.snr_db);
            a.pace_factor = s.value("pace_factor", a.pace_factor);
            a.pitch_semitones = s.value("pitch_semitones", a.pitch_semitones);
            a.seed = s.value("seed", o->seed + specs.size());
            specs.push_back(a);
          }
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(o->specs + ": " + e.what());
        }
      }
      const fs::path dir = make_out(o->out);
      fs::path root = o->audio_root;
      if (root.empty()) root = fs::path(o->manifest).parent_path();
      const Manifest m = audio::augment_manifest(load_manifest(o->manifest), specs, dir / "wav", root, jobs);
      write_manifest(m, dir / "manifest.jsonl");
      ojson sj = ojson::array();
      for (const auto& s : specs) {
        sj.push_back({{"gain_db", s.gain_db},
                      {"snr_db", s.snr_db},
                      {"pace_factor", s.pace_factor},
                      {"pitch_semitones", s.pitch_semitones},
                      {"seed", s.seed}});
      }
      write_report(dir, ojson{{"specs", sj}, {"utterances", m.size()}}.dump());
      out << "augmented manifest has " << m.size() << " utterances\n";
    });
  }
}

struct LmOpts {
  std::string arpa;
  lm::RescoreConfig cfg;
  std::string lid_source = "raw";

  void add(CLI::App* sub, bool with_lid_source) {
    sub->add_option("--lm", arpa, "ARPA model for n-best rescoring")->check(CLI::ExistingFile);
    sub->add_option("--alpha", cfg.alpha, "LM weight")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "Word insertion bonus")->capture_default_str();
    sub->add_option("--beam", cfg.beam, "Hypotheses kept per utterance")->capture_default_str();
    if (with_lid_source) {
      sub->add_option("--lid-source", lid_source, "Text LID reads when an LM is given")
          ->check(CLI::IsMember({"raw", "rescored"}))
          ->capture_default_str();
    }
  }
};

std::map<LanguageId, std::unique_ptr<ReplayDecoder>> load_decoders(const std::vector<std::string>& specs,
                                                                   std::string_view flag) {
  std::map<LanguageId, std::unique_ptr<ReplayDecoder>> out;
  for (const auto& s : specs) {
    auto [label, path] = split_assignment(s, flag);
    auto d = std::make_unique<ReplayDecoder>(ReplayDecoder::load(path));
    if (!out.emplace(LanguageId(label), std::move(d)).second) throw DataError("duplicate decoder for '" + label + "'");
  }
  return out;
}

DecoderMap view(const std::map<LanguageId, std::unique_ptr<ReplayDecoder>>& ds) {
  DecoderMap m;
  for (const auto& [id, d] : ds) m.emplace(id, d.get());
  return m;
}

void Cli::setup_run() {
  auto* run = app.add_subcommand("run", "End-to-end evaluation of system configurations");
  run->require_subcommand(1);
  auto finish = [this](const std::string& out_dir, const PipelineReport& r) {
    const fs::path dir = make_out(out_dir);
    write_report(dir, r.to_json());
    const std::string table = r.to_table();
    write_file(dir / "report.txt", table);
    out << table;
  };
  {
    struct Opts {
      std::string manifest, hyp, table, out;
      LmOpts lmo;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = run->add_subcommand("m1", "One common multilingual decoder for every utterance");
    sub->add_option("--manifest", o->manifest, "Test manifest with references")->required()->check(CLI::ExistingFile);
    sub->add_option("--hyp", o->hyp, "Common decoder output (TSV or JSONL n-best)")->required()->check(CLI::ExistingFile);
    sub->add_option("--translit-table", o->table, "Also report T-WER")->check(CLI::ExistingFile);
    o->lmo.add(sub, false);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, finish] {
      const auto dec = ReplayDecoder::load(o->hyp);
      std::optional<TransliterationTable> table;
      if (!o->table.empty()) table = TransliterationTable::load(o->table);
      std::optional<lm::NGramModel> model;
      PipelineOptions opt;
      opt.jobs = jobs;
      if (!o->lmo.arpa.empty()) {
        model = lm::NGramModel::load_arpa(o->lmo.arpa);
        opt.lm = &*model;
        opt.rescore = o->lmo.cfg;
      }
      finish(o->out, run_m1(dec, load_manifest(o->manifest), table ? &*table : nullptr, opt));
    });
  }
  {
    struct Opts {
      std::string manifest, common, table, out;
      std::vector<std::string> mono, vocabs;
      PolicyOpts policy;
      bool oracle = false;
      LmOpts lmo;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = run->add_subcommand("m2", "Common decoder, script LID, then the monolingual decoder of that language");
    sub->add_option("--manifest", o->manifest, "Test manifest with references")->required()->check(CLI::ExistingFile);
    sub->add_option("--common-hyp", o->common, "Common decoder output")->required()->check(CLI::ExistingFile);
    sub->add_option("--mono", o->mono, "Monolingual decoder output per language, LANG=FILE")->required();
    sub->add_option("--vocab", o->vocabs, "Vocab file per language")->required()->check(CLI::ExistingFile);
    o->policy.add(sub);
    sub->add_flag("--oracle-lid", o->oracle, "Route by the gold label instead of LID");
    sub->add_option("--translit-table", o->table, "Also report T-WER")->check(CLI::ExistingFile);
    o->lmo.add(sub, true);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, finish] {
      const auto common = ReplayDecoder::load(o->common);
      const auto mono = load_decoders(o->mono, "--mono");
      const VocabRegistry reg = load_registry(o->vocabs, o->policy.relabel);
      const LidPolicy policy = o->policy.resolve(reg);
      std::optional<TransliterationTable> table;
      if (!o->table.empty()) table = TransliterationTable::load(o->table);
      std::optional<lm::NGramModel> model;
      PipelineOptions opt;
      opt.jobs = jobs;
      opt.oracle_lid = o->oracle;
      opt.lid_source = o->lmo.lid_source == "rescored" ? LidSource::kRescored : LidSource::kRaw;
      if (!o->lmo.arpa.empty()) {
        model = lm::NGramModel::load_arpa(o->lmo.arpa);
        opt.lm = &*model;
        opt.rescore = o->lmo.cfg;
      }
      const Manifest m = reg.relabel(load_manifest(o->manifest));
      finish(o->out, run_m2(common, view(mono), reg, policy, m, table ? &*table : nullptr, opt));
    });
  }
  {
    struct Opts {
      std::string manifest, mode, table, out;
      std::vector<std::string> decoders;
      LmOpts lmo;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = run->add_subcommand("cs", "Code-switched evaluation: one common decoder (c1) or one per pair (c2)");
    sub->add_option("--manifest", o->manifest, "Manifest labeled with pair ids")->required()->check(CLI::ExistingFile);
    sub->add_option("--mode", o->mode, "c1 or c2")->required()->check(CLI::IsMember({"c1", "c2"}));
    sub->add_option("--decoder", o->decoders, "Decoder output, LABEL=FILE (c1: exactly one, c2: one per pair)")
        ->required();
    sub->add_option("--translit-table", o->table, "Transliteration table")->required()->check(CLI::ExistingFile);
    o->lmo.add(sub, false);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, finish] {
      const auto decs = load_decoders(o->decoders, "--decoder");
      const auto table = TransliterationTable::load(o->table);
      std::optional<lm::NGramModel> model;
      PipelineOptions opt;
      opt.jobs = jobs;
      if (!o->lmo.arpa.empty()) {
        model = lm::NGramModel::load_arpa(o->lmo.arpa);
        opt.lm = &*model;
        opt.rescore = o->lmo.cfg;
      }
      const auto mode = o->mode == "c1" ? CodeSwitchMode::kC1 : CodeSwitchMode::kC2;
      finish(o->out, run_codeswitch(view(decs), load_manifest(o->manifest), table, mode, opt));
    });
  }
  {
    struct Opts {
      std::string manifest, table, out;
      std::vector<std::string> decoders;
      LmOpts lmo;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = run->add_subcommand("mono", "Each utterance through the decoder of its gold language");
    sub->add_option("--manifest", o->manifest, "Test manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("--decoder", o->decoders, "Decoder output per language, LANG=FILE")->required();
    sub->add_option("--translit-table", o->table, "Also report T-WER")->check(CLI::ExistingFile);
    o->lmo.add(sub, false);
    sub->add_option("--out", o->out, "Output directory")->required();
    on(sub, [this, o, finish] {
      const auto decs = load_decoders(o->decoders, "--decoder");
      std::optional<TransliterationTable> table;
      if (!o->table.empty()) table = TransliterationTable::load(o->table);
      std::optional<lm::NGramModel> model;
      PipelineOptions opt;
      opt.jobs = jobs;
      if (!o->lmo.arpa.empty()) {
        model = lm::NGramModel::load_arpa(o->lmo.arpa);
        opt.lm = &*model;
        opt.rescore = o->lmo.cfg;
      }
      finish(o->out, run_monolingual(view(decs), load_manifest(o->manifest), table ? &*table : nullptr, opt));
    });
  }
  {
    auto cfg = std::make_shared<SimulationConfig>();
    auto out_dir = std::make_shared<std::string>();
    auto* sub = run->add_subcommand("simulate", "Synthetic corpus and decoders; compares M1 against M2");
    sub->add_option("--seed", cfg->seed, "Decoder seed")->capture_default_str();
    sub->add_option("--corpus-seed", cfg->corpus.seed, "Corpus seed")->capture_default_str();
    sub->add_option("--languages", cfg->corpus.languages, "Number of synthetic languages")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, max_simulated_languages()));
    sub->add_option("--utterances", cfg->corpus.utterances_per_language, "Utterances per language")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--text-length", cfg->corpus.text_length, "Approximate characters per utterance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--common-cer", cfg->common_cer, "Character error rate of the common decoder")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--mono-cer", cfg->mono_cer, "Character error rate of each monolingual decoder")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--cross-script-rate", cfg->cross_script_rate,
                    "Share of common-decoder substitutions drawn from another language's script")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--out", *out_dir, "Output directory")->required();
    on(sub, [this, cfg, out_dir] {
      SimulationConfig c = *cfg;
      c.jobs = jobs;
      const SimulationResult r = simulate(c);
      const fs::path dir = make_out(*out_dir);
      write_report(dir, r.to_json(), "simulate.json");
      const auto res = ojson::parse(r.to_json());
      const auto& cmp = res.at("comparison");
      out << "m1 macro WER " << cmp.at("m1_macro_wer").dump() << "\n";
      out << "m2 macro WER " << cmp.at("m2_macro_wer").dump() << "\n";
      out << "LID accuracy " << cmp.at("lid_accuracy").dump() << "\n";
    });
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  cli.setup();
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const CLI::App* node = &cli.app;
  for (const auto& name : active_path(cli.app)) node = node->get_subcommand(name);
  auto it = cli.actions.find(node);
  if (it == cli.actions.end()) {
    err << "error: incomplete command; see --help\n";
    return kExitUsage;
  }
  try {
    it->second();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("mlasr");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mlasr::cli
