// Writes every built-in corpus map to DIR/NAME.json.

#include <fstream>
#include <iostream>

#include "milnorkit/corpus.hpp"
#include "milnorkit/map_json.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: export_corpus DIR\n";
    return 1;
  }
  for (const auto& [name, map] : milnorkit::corpus::all()) {
    const std::string path = std::string(argv[1]) + "/" + name + ".json";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    out << milnorkit::serialize_map(map) << "\n";
  }
  return 0;
}
