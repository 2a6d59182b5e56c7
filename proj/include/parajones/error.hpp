#pragma once

#include <stdexcept>
#include <string>

namespace parajones {

enum class errc {
  parse_error,
  inconsistent_arc,
  unorientable_diagram,
  inconsistent_crossing,
  non_divisible,
  domain_mismatch,
  missing_closure,
  label_collision,
  dangling_transposition,
  too_small,
  too_many_pieces,
  open_diagram,
  all_rejected,
  invalid_config,
  internal,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace parajones
