#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wno/geometry.hpp"

namespace wno {

enum class ParseErrorKind { Syntax, UndeclaredField, IndexRange, Semantic };

std::string to_string(ParseErrorKind k);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& message);

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
  std::string message_;
};

// Indices are 0-based here; the file syntax is 1-based.
struct LocalEntry {
  int i = 0, j = 0;
  DiffEntry op;
  friend bool operator==(const LocalEntry&, const LocalEntry&) = default;
};

struct NonlocalEntry {
  int i = 0, j = 0;
  Rational e = 1;
  RationalExpr w, z;
  friend bool operator==(const NonlocalEntry&, const NonlocalEntry&) = default;
};

struct OperatorDecl {
  std::string name;
  std::vector<LocalEntry> local;
  std::vector<NonlocalEntry> nonlocal;
  friend bool operator==(const OperatorDecl&, const OperatorDecl&) = default;
};

struct MatrixEntry {
  int i = 0, j = 0;
  RationalExpr value;
  friend bool operator==(const MatrixEntry&, const MatrixEntry&) = default;
};

struct FirstOrderDecl {
  std::string name;
  std::vector<MatrixEntry> g;
  std::vector<MatrixEntry> w;
  friend bool operator==(const FirstOrderDecl&, const FirstOrderDecl&) = default;
};

struct OperatorFile {
  std::vector<std::string> fields;
  std::vector<OperatorDecl> operators;
  std::vector<FirstOrderDecl> firstorders;

  int n() const { return static_cast<int>(fields.size()); }
  const OperatorDecl* find_operator(const std::string& name) const;
  const FirstOrderDecl* find_firstorder(const std::string& name) const;
  Naming naming() const;

  friend bool operator==(const OperatorFile&, const OperatorFile&) = default;
};

/// Grammar:
///   file       := decl*
///   decl       := fields | operator | firstorder
///   fields     := "fields" ident ("," ident)* ";"
///   operator   := "operator" ident "{" entry* "}"
///   entry      := "local[" i "," j "]:" diffexpr ";"
///               | "nonlocal[" i "," j "]:" [rational "*"] "[" expr "|" expr "]" ";"
///   firstorder := "firstorder" ident "{" ("g[" i "," j "]:" expr ";")+ ("w[" i "," j "]:" expr ";")* "}"
/// `#` starts a comment that runs to the end of the line.
OperatorFile parse(std::string_view source);

/// Canonical text for a parsed file; parse(print(f)) == f.
std::string print(const OperatorFile& file);

WNOperator to_operator(const OperatorFile& file, const OperatorDecl& decl);
MetricData to_metric(const OperatorFile& file, const FirstOrderDecl& decl);

}  // namespace wno
