#include "atlas/common.hpp"

namespace atlas {

std::string_view to_string(Level level) {
  return level == Level::main ? "main" : "sub";
}

Level level_from_string(std::string_view text) {
  if (text == "main") return Level::main;
  if (text == "sub") return Level::sub;
  throw Error("unknown topic level '" + std::string(text) + "'");
}

}  // namespace atlas
