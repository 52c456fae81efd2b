#pragma once

#include <cstdlib>
#include <string>

namespace logicad::io {

struct Endpoint {
  std::string url;  // e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key;
  int timeout_s = 60;
};

inline std::string api_key_from_env() {
  const char* k = std::getenv("LOGICAD_API_KEY");
  return k ? k : "";
}

}  // namespace logicad::io
