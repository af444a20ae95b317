#include "introspect/sexpr.h"

#include <cctype>

#include "introspect/errors.h"

namespace introspect {

std::string_view SExpr::head() const {
  if (!list || items.empty() || items.front().list) return {};
  return items.front().atom;
}

std::string SExpr::str() const {
  if (!list) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += items[i].str();
  }
  out += ')';
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    SExpr e;
    e.line = line_;
    char c = text_[pos_];
    if (c == ')') fail("unexpected ')'");
    if (c == '(') {
      ++pos_;
      e.list = true;
      while (true) {
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated list opened on line " + std::to_string(e.line));
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      ++pos_;
    }
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("line " + std::to_string(line_) + ": " + msg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::vector<SExpr> read_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

SExpr read_sexpr(std::string_view text) {
  auto all = read_sexprs(text);
  if (all.size() != 1) {
    throw ParseError("expected exactly one expression, found " +
                     std::to_string(all.size()));
  }
  return std::move(all.front());
}

}  // namespace introspect
