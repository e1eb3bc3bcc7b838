#include <httplib.h>

#include <iostream>

#include "treebank/cli.hpp"
#include "treebank/http.hpp"
#include "treebank/service.hpp"

namespace {

int serve(const std::string& file, const std::string& host, int port, const std::string& schema_path,
          std::ostream& out, std::ostream& err) {
  using namespace treebank;
  const Schema schema = schema_path.empty() ? Schema::defaults() : load_schema_file(schema_path);
  service::Session session(file, schema);
  httplib::Server server;
  http::register_routes(server, session);
  out << "serving " << file << " (" << session.summary().sentence_count << " sentences) on http://" << host << ':'
      << port << std::endl;
  if (!server.listen(host, port)) {
    err << "error: cannot listen on " << host << ':' << port << '\n';
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  std::vector<std::string> args(argv + 1, argv + argc);
  return treebank::cli::run(args, std::cout, std::cerr, &serve);
}
