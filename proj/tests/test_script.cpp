#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "diactk/script.hpp"
#include "diactk/tsv.hpp"
#include "diactk/utf8.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace diactk;

namespace {

constexpr char32_t kFa = U'َ';  // fatha
constexpr char32_t kDa = U'ُ';  // damma
constexpr char32_t kSh = U'ّ';  // shadda
constexpr char32_t kSu = U'ْ';  // sukun

std::pair<ParseError::Code, size_t> parse_failure(const std::string& text) {
  try {
    parse_arabic(text);
  } catch (const ParseError& e) {
    return {e.code(), e.position()};
  }
  REQUIRE_MESSAGE(false, "expected ParseError for \"", text, "\"");
  return {ParseError::Code::UnsupportedCharacter, 0};
}

}  // namespace

TEST_CASE("mark helpers round-trip") {
  const Mark all[] = {Mark::Fatha, Mark::Damma,  Mark::Kasra,
                      Mark::Sukun, Mark::Shadda, Mark::DaggerAlif};
  for (Mark m : all) {
    auto back = mark_of(mark_codepoint(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(mark_codepoint(Mark::Fatha) == U'َ');
  CHECK(mark_codepoint(Mark::Damma) == U'ُ');
  CHECK(mark_codepoint(Mark::Kasra) == U'ِ');
  CHECK(mark_codepoint(Mark::Shadda) == U'ّ');
  CHECK(mark_codepoint(Mark::Sukun) == U'ْ');
  CHECK(mark_codepoint(Mark::DaggerAlif) == U'ٰ');

  CHECK(is_short_vowel(Mark::Fatha));
  CHECK(is_short_vowel(Mark::Damma));
  CHECK(is_short_vowel(Mark::Kasra));
  CHECK(!is_short_vowel(Mark::Sukun));
  CHECK(!is_short_vowel(Mark::Shadda));
  CHECK(!is_short_vowel(Mark::DaggerAlif));

  // nunation is not a representable mark
  for (char32_t cp : {U'ً', U'ٌ', U'ٍ'}) {
    CHECK(is_nunation(cp));
    CHECK(!mark_of(cp).has_value());
  }
  CHECK(!is_nunation(kFa));
}

TEST_CASE("letter classes") {
  CHECK(letter_class_of(U'ب') == LetterClass::PlainConsonant);
  CHECK(letter_class_of(U'ا') == LetterClass::AlifBare);
  CHECK(letter_class_of(U'أ') == LetterClass::AlifHamzaAbove);
  CHECK(letter_class_of(U'إ') == LetterClass::AlifHamzaBelow);
  CHECK(letter_class_of(U'آ') == LetterClass::AlifMadda);
  CHECK(letter_class_of(U'ٱ') == LetterClass::AlifWasla);
  CHECK(letter_class_of(U'و') == LetterClass::Waw);
  CHECK(letter_class_of(U'ؤ') == LetterClass::WawHamza);
  CHECK(letter_class_of(U'ي') == LetterClass::Ya);
  CHECK(letter_class_of(U'ئ') == LetterClass::YaHamza);
  CHECK(letter_class_of(U'ة') == LetterClass::TaMarbuta);
  CHECK(letter_class_of(U'پ') == LetterClass::ForeignExtension);
  CHECK(!letter_class_of(U'x').has_value());
  CHECK(!letter_class_of(kFa).has_value());

  auto letters = supported_letters();
  CHECK(std::is_sorted(letters.begin(), letters.end()));
  for (char32_t cp : letters) {
    CHECK(is_supported_letter(cp));
    CHECK(letter_class_of(cp).has_value());
  }
  CHECK(!is_supported_letter(kFa));
  CHECK(!is_supported_letter(U'a'));
}

TEST_CASE("parse segments, skeleton, render") {
  DiacritizedWord w = parse_arabic("كَرَم");
  REQUIRE(w.size() == 3);
  CHECK(w.segments()[0].letter == U'ك');
  CHECK(w.segments()[0].has(Mark::Fatha));
  CHECK(w.segments()[0].has_short_vowel());
  CHECK(w.segments()[1].letter == U'ر');
  CHECK(w.segments()[1].has(Mark::Fatha));
  CHECK(w.segments()[2].letter == U'م');
  CHECK(w.segments()[2].unmarked());
  CHECK(w.skeleton() == "كرم");
  CHECK(w.skeleton_u32() == U"كرم");
  CHECK(strip_diacritics(w) == "كرم");
  CHECK(w.render() == "كَرَم");

  CHECK(parse_arabic("").empty());
  CHECK(parse_arabic("").render().empty());
}

TEST_CASE("two-mark clusters parse in either order and keep it") {
  std::u32string canon = {U'ع', kFa, U'ض', kSh, kDa, U'و', U'م'};
  std::u32string swapped = {U'ع', kFa, U'ض', kDa, kSh, U'و', U'م'};
  DiacritizedWord a = parse_arabic(utf8::encode(canon));
  DiacritizedWord b = parse_arabic(utf8::encode(swapped));
  REQUIRE(a.size() == 4);
  REQUIRE(b.size() == 4);
  CHECK(a.segments()[1].marks == std::vector<Mark>{Mark::Shadda, Mark::Damma});
  CHECK(b.segments()[1].marks == std::vector<Mark>{Mark::Damma, Mark::Shadda});
  // render preserves the encounter order exactly
  CHECK(a.render() == utf8::encode(canon));
  CHECK(b.render() == utf8::encode(swapped));
  CHECK(a.render() != b.render());
  CHECK(a.skeleton() == b.skeleton());
}

TEST_CASE("parse errors carry codes and codepoint positions") {
  auto [c1, p1] = parse_failure(utf8::encode(std::u32string{kFa, U'ب'}));
  CHECK(c1 == ParseError::Code::LeadingDiacritic);
  CHECK(p1 == 0);

  // nunation (fathatan) is rejected outright
  auto [c2, p2] = parse_failure(utf8::encode(std::u32string{U'ب', U'ً'}));
  CHECK(c2 == ParseError::Code::NunationMark);
  CHECK(p2 == 1);

  // two short vowels cannot share a letter
  auto [c3, p3] = parse_failure(utf8::encode(std::u32string{U'ب', kFa, kDa}));
  CHECK(c3 == ParseError::Code::OversizedCluster);
  CHECK(p3 == 2);

  // shadda+sukun is not a representable cluster
  auto [c4, p4] = parse_failure(utf8::encode(std::u32string{U'ب', kSh, kSu}));
  CHECK(c4 == ParseError::Code::OversizedCluster);
  CHECK(p4 == 2);

  // a third mark never fits
  auto [c5, p5] =
      parse_failure(utf8::encode(std::u32string{U'ب', kFa, kSh, U'ِ'}));
  CHECK(c5 == ParseError::Code::OversizedCluster);
  CHECK(p5 == 3);

  auto [c6, p6] = parse_failure("xكرم");
  CHECK(c6 == ParseError::Code::UnsupportedCharacter);
  CHECK(p6 == 0);

  auto [c7, p7] = parse_failure("كرqم");
  CHECK(c7 == ParseError::Code::UnsupportedCharacter);
  CHECK(p7 == 2);

  CHECK(std::string(parse_error_name(ParseError::Code::UnsupportedCharacter)) ==
        "unsupported-character");
  CHECK(std::string(parse_error_name(ParseError::Code::LeadingDiacritic)) ==
        "leading-diacritic");
  CHECK(std::string(parse_error_name(ParseError::Code::OversizedCluster)) ==
        "oversized-cluster");
  CHECK(std::string(parse_error_name(ParseError::Code::NunationMark)) ==
        "nunation-mark");

  try {
    parse_arabic(utf8::encode(std::u32string{U'ب', kFa, kDa}));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()) == "oversized-cluster at position 2");
  }
}

TEST_CASE("hsb table is bijective and matches the bundled file") {
  const HsbTable& table = HsbTable::standard();
  for (char32_t cp : supported_letters()) {
    CHECK(table.to_roman(cp).has_value());
  }
  const Mark all[] = {Mark::Fatha, Mark::Damma,  Mark::Kasra,
                      Mark::Sukun, Mark::Shadda, Mark::DaggerAlif};
  for (Mark m : all) {
    CHECK(table.to_roman(mark_codepoint(m)).has_value());
  }

  std::set<char32_t> arabics, romans;
  for (const auto& [ar, ro] : table.rows()) {
    CHECK(table.to_roman(ar) == ro);
    CHECK(table.to_arabic(ro) == ar);
    CHECK(arabics.insert(ar).second);
    CHECK(romans.insert(ro).second);
  }

  HsbTable file = HsbTable::from_file(testutil::data_file("hsb_table.tsv"));
  CHECK(file.rows() == table.rows());
}

TEST_CASE("romanization round-trips the corpus forms fixture") {
  auto rows = tsv::read_rows(testutil::fixture("corpus_forms.tsv"));
  REQUIRE(rows.size() >= 60);
  for (const auto& row : rows) {
    REQUIRE(row.cells.size() == 2);
    DiacritizedWord w = parse_arabic(row.cells[0]);
    CHECK(to_hsb(w) == row.cells[1]);
    CHECK(from_hsb(row.cells[1]).render() == row.cells[0]);
  }
}

TEST_CASE("romanization is one symbol per codepoint") {
  DiacritizedWord w = parse_arabic("عَضُّوم");
  std::string hsb = to_hsb(w);
  CHECK(utf8::decode(hsb).size() == utf8::decode(w.render()).size());
}

TEST_CASE("unknown romanization symbols are rejected with a position") {
  try {
    from_hsb("@");
    FAIL("expected HsbError");
  } catch (const HsbError& e) {
    CHECK(e.position() == 0);
  }
  std::string good = to_hsb(parse_arabic("كَرَم"));
  try {
    from_hsb(good + "@");
    FAIL("expected HsbError");
  } catch (const HsbError& e) {
    CHECK(e.position() == utf8::decode(good).size());
  }
  // a lone vowel symbol maps back to a leading diacritic
  char32_t fatha_roman = *HsbTable::standard().to_roman(kFa);
  CHECK_THROWS_AS(from_hsb(utf8::encode(fatha_roman)), ParseError);
}
