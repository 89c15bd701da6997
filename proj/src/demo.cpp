#include "portphase/demo.hpp"

#include "portphase/io.hpp"

namespace portphase {

RationalMatrix demo_network_a() { return fig4_network(1.0, 1.0, 2.0, 1.0); }

RationalMatrix demo_network_b() { return fig14_network(10.0, 0.2, 1.0, 0.1, 0.5); }

std::vector<ConnectionKind> demo_connections() {
    return {ConnectionKind::Shorted, ConnectionKind::Open,    ConnectionKind::Series,       ConnectionKind::Parallel,
            ConnectionKind::Hybrid,  ConnectionKind::Cascade, ConnectionKind::HybridCascade};
}

SweepResult demo_connection_sweep(ConnectionKind kind) {
    const RationalMatrix a = demo_network_a(), b = demo_network_b();
    FrequencyGrid grid = build_grid({&a, &b}, kDemoOmegaLo, kDemoOmegaHi, kDemoPointsPerDecade);
    return connect_sweep(kind, a, b, 1, grid);
}

std::vector<std::pair<std::string, std::string>> demo_files(const std::string& figure) {
    std::vector<std::pair<std::string, std::string>> out;
    if (figure == "fig5") {
        for (double gamma : {0.0, 1.0, 10.0}) {
            RationalMatrix Z = fig4_network(1.0, 1.0, 2.0, gamma);
            FrequencyGrid grid = build_grid(Z, kDemoOmegaLo, kDemoOmegaHi, kDemoPointsPerDecade);
            out.push_back({"fig5-gamma" + std::to_string(int(gamma)) + ".csv", sweep_to_csv(sweep(Z, grid))});
        }
    } else if (figure == "fig15") {
        for (ConnectionKind k : demo_connections())
            out.push_back({"fig15-" + std::string(connection_name(k)) + ".csv", sweep_to_csv(demo_connection_sweep(k))});
    } else {
        fail(ErrorCode::InvalidArgument, "unknown figure '" + figure + "' (expected fig5 or fig15)");
    }
    return out;
}

}  // namespace portphase
