#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "remoteness/types.hpp"

namespace test {

namespace fs = std::filesystem;

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (fs::temp_directory_path() / "ri_test_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) {
      throw std::runtime_error("mkdtemp failed");
    }
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path file(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the built CLI with output capture. Arguments are shell-quoted.
inline CliRun run_cli(const std::vector<std::string>& args,
                      const fs::path& workdir) {
  const fs::path out_file = workdir / "_stdout.txt";
  const fs::path err_file = workdir / "_stderr.txt";
  std::string cmd = "cd '" + workdir.string() + "' && '" RI_CLI_PATH "'";
  for (const auto& arg : args) {
    cmd += " '" + arg + "'";
  }
  cmd += " > '" + out_file.string() + "' 2> '" + err_file.string() + "'";
  const int status = std::system(cmd.c_str());
  CliRun run;
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  run.out = read_file(out_file);
  run.err = read_file(err_file);
  return run;
}

inline remoteness::PlaceRecord place(const std::string& id, int year, double x,
                                     double y, std::int64_t population,
                                     const std::string& county = "") {
  remoteness::PlaceRecord rec;
  rec.place_id = id;
  rec.year = year;
  rec.x = x;
  rec.y = y;
  rec.population = population;
  rec.county_id = county;
  return rec;
}

inline remoteness::PlaceSet place_set(int year, remoteness::CoordinateMode mode,
                                      std::vector<remoteness::PlaceRecord> recs) {
  remoteness::PlaceSet set;
  set.year = year;
  set.mode = mode;
  set.records = std::move(recs);
  return set;
}

}  // namespace test
