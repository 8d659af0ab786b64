// Dumps the built-in tables (romanization, foreign-letter map, sound classes,
// letter-sub pairs) as TSV files, so the shipped data files can be regenerated
// instead of maintained by hand. Tests assert file/built-in lockstep.

#include <iostream>
#include <sstream>
#include <string>

#include "diactk/eval.hpp"
#include "diactk/normalize.hpp"
#include "diactk/script.hpp"
#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"

using namespace diactk;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_data_tables <output-dir>\n";
    return 2;
  }
  std::string dir = argv[1];

  {
    std::ostringstream out;
    out << "# per-symbol romanization table: <arabic>\\t<roman>\n";
    for (auto [arabic, roman] : HsbTable::standard().rows()) {
      out << utf8::encode(arabic) << '\t' << utf8::encode(roman) << '\n';
    }
    tsv::write_file(dir + "/hsb_table.tsv", out.str());
  }
  {
    std::ostringstream out;
    out << "# extension-letter replacements: <foreign>\\t<arabic>\n";
    for (auto [foreign, arabic] : ForeignLetterMap::standard().rows()) {
      out << utf8::encode(foreign) << '\t' << utf8::encode(arabic) << '\n';
    }
    tsv::write_file(dir + "/foreign_letter_map.tsv", out.str());
  }
  {
    std::ostringstream out;
    out << "# shared sound classes: <symbol>\\t<class>\n";
    for (const auto& [symbol, klass] : FreemanTable::standard().rows()) {
      out << utf8::encode(symbol) << '\t' << klass << '\n';
    }
    tsv::write_file(dir + "/freeman_classes.tsv", out.str());
  }
  {
    std::ostringstream out;
    out << "# confusable letter pairs: <a>\\t<b>\n";
    for (auto [a, b] : LetterSubPairs::standard().rows()) {
      out << utf8::encode(a) << '\t' << utf8::encode(b) << '\n';
    }
    tsv::write_file(dir + "/letter_sub_pairs.tsv", out.str());
  }
  std::cout << "wrote 4 tables to " << dir << '\n';
  return 0;
}
