#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace diactk {

// Letter kinds. Hamza-seated letters and the alif variants get their own kind
// because validation, repair and lemma matching all treat them differently
// from plain consonants.
enum class LetterClass {
  PlainConsonant,
  AlifBare,
  AlifHamzaAbove,
  AlifHamzaBelow,
  AlifMadda,
  AlifWasla,
  Waw,
  WawHamza,
  Ya,
  YaHamza,
  TaMarbuta,
  ForeignExtension,
};

// Diacritic marks a letter may carry. Nunation marks are deliberately not
// representable; the parser rejects them.
enum class Mark { Fatha, Damma, Kasra, Sukun, Shadda, DaggerAlif };

char32_t mark_codepoint(Mark mark);
std::optional<Mark> mark_of(char32_t cp);
bool is_nunation(char32_t cp);
bool is_short_vowel(Mark mark);

std::optional<LetterClass> letter_class_of(char32_t cp);
bool is_supported_letter(char32_t cp);

// All letters the parser accepts, in codepoint order.
std::span<const char32_t> supported_letters();

// One letter plus the marks attached to it, in input order.
struct Segment {
  char32_t letter = 0;
  LetterClass klass = LetterClass::PlainConsonant;
  std::vector<Mark> marks;

  bool has(Mark m) const;
  bool unmarked() const { return marks.empty(); }
  bool has_short_vowel() const;
};

class DiacritizedWord {
 public:
  DiacritizedWord() = default;
  explicit DiacritizedWord(std::vector<Segment> segments)
      : segments_(std::move(segments)) {}

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<Segment>& segments() { return segments_; }
  bool empty() const { return segments_.empty(); }
  size_t size() const { return segments_.size(); }

  // UTF-8 text, marks included, in the order they were parsed.
  std::string render() const;
  // Letters only.
  std::string skeleton() const;
  std::u32string skeleton_u32() const;

 private:
  std::vector<Segment> segments_;
};

class ParseError : public std::runtime_error {
 public:
  enum class Code {
    UnsupportedCharacter,
    LeadingDiacritic,
    OversizedCluster,
    NunationMark,
  };

  ParseError(Code code, size_t position);
  Code code() const { return code_; }
  // Codepoint index into the input text.
  size_t position() const { return position_; }

 private:
  Code code_;
  size_t position_;
};

const char* parse_error_name(ParseError::Code code);

// Parses UTF-8 Arabic text into segments. Throws ParseError on unsupported
// codepoints, a mark with no preceding letter, an over-full or ill-formed
// mark cluster, or a nunation mark.
DiacritizedWord parse_arabic(std::string_view text);

std::string strip_diacritics(const DiacritizedWord& word);

class HsbError : public std::runtime_error {
 public:
  explicit HsbError(size_t position);
  // Codepoint index into the romanized input.
  size_t position() const { return position_; }

 private:
  size_t position_;
};

// Per-symbol romanization table. Bijective: every Arabic codepoint maps to a
// distinct single romanized codepoint and back. The bundled table must cover
// the whole supported alphabet plus all marks; from_file enforces the same.
class HsbTable {
 public:
  static const HsbTable& standard();
  static HsbTable from_file(const std::string& path);

  std::optional<char32_t> to_roman(char32_t arabic) const;
  std::optional<char32_t> to_arabic(char32_t roman) const;
  const std::vector<std::pair<char32_t, char32_t>>& rows() const { return rows_; }

 private:
  static HsbTable from_rows(std::vector<std::pair<char32_t, char32_t>> rows);

  std::vector<std::pair<char32_t, char32_t>> rows_;
};

std::string to_hsb(const DiacritizedWord& word,
                   const HsbTable& table = HsbTable::standard());

// Maps romanized symbols back to Arabic codepoints and parses the result.
// Unknown symbols throw HsbError; the reassembled text can also raise the
// usual ParseError conditions.
DiacritizedWord from_hsb(std::string_view hsb,
                         const HsbTable& table = HsbTable::standard());

}  // namespace diactk
