#include <httplib.h>

#include <iostream>
#include <string>
#include <vector>

#include "icecluster/cli.hpp"
#include "icecluster/service.hpp"

namespace {

int serve(int port, const std::string& state_file, std::ostream& log) {
  icecluster::Service service(state_file);
  httplib::Server server;
  auto forward = [&](const httplib::Request& req, httplib::Response& res) {
    std::string target = req.path;
    std::string sep = "?";
    for (const auto& [key, value] : req.params) {
      target += sep + key + "=" + value;
      sep = "&";
    }
    auto r = service.handle(req.method, target, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  const std::string any = R"(/.*)";
  server.Get(any, forward);
  server.Post(any, forward);
  log << "listening on port " << port << std::endl;
  if (!server.listen("0.0.0.0", port)) {
    log << "cannot listen on port " << port << std::endl;
    return icecluster::kExitDomain;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return icecluster::cli_dispatch(args, std::cout, std::cerr, serve);
}
