// Python bindings for the main operations: mesh loading, discretization,
// graph construction, and both solvers.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wsp3d/discretization.hpp"
#include "wsp3d/fixtures.hpp"
#include "wsp3d/graph.hpp"
#include "wsp3d/mesh.hpp"
#include "wsp3d/sssp.hpp"

namespace py = pybind11;
using namespace wsp3d;

namespace {

struct Engine {
    WeightedTetMesh mesh;
    Discretization disc;
    ApproxGraph graph;
    Engine(WeightedTetMesh m, double epsilon)
        : mesh(std::move(m)),
          disc(mesh, DiscretizationParams{epsilon}),
          graph(mesh, disc) {}
};

}  // namespace

PYBIND11_MODULE(_wsp3d, m) {
    m.doc() = "Weighted shortest paths in 3-d tetrahedral domains";

    py::class_<WeightedTetMesh>(m, "Mesh")
        .def_static("from_text", &WeightedTetMesh::from_text)
        .def_static("from_file", &WeightedTetMesh::from_file)
        .def("serialize", &WeightedTetMesh::serialize)
        .def_property_readonly("num_vertices",
                               [](const WeightedTetMesh& m) { return m.vertices().size(); })
        .def_property_readonly("num_tets",
                               [](const WeightedTetMesh& m) { return m.tets().size(); })
        .def_property_readonly("num_faces",
                               [](const WeightedTetMesh& m) { return m.faces().size(); })
        .def("vertex",
             [](const WeightedTetMesh& m, int i) {
                 const Vec3& p = m.vertices().at(i);
                 return py::make_tuple(p.x, p.y, p.z);
             })
        .def("d_at_vertex", [](const WeightedTetMesh& m, int v) { return m.d_at_vertex(v); })
        .def("vertex_radius", &WeightedTetMesh::vertex_radius);

    py::class_<Engine>(m, "Engine")
        .def(py::init([](const WeightedTetMesh& mesh, double epsilon) {
                 return new Engine(WeightedTetMesh(mesh), epsilon);
             }),
             py::arg("mesh"), py::arg("epsilon"))
        .def_property_readonly("num_nodes",
                               [](const Engine& e) { return e.graph.nodes().size(); })
        .def_property_readonly("num_triples",
                               [](const Engine& e) { return e.graph.triples().size(); })
        .def("audit",
             [](const Engine& e) {
                 AuditReport r = e.disc.audit();
                 py::dict d;
                 d["total_nodes"] = r.total_nodes;
                 d["violations"] = r.violations;
                 d["c_of_domain"] = r.c_of_domain;
                 return d;
             })
        .def("solve",
             [](const Engine& e, int source, const std::string& algorithm) {
                 SolveResult r = algorithm == "baseline" ? dijkstra_baseline(e.graph, source)
                                                         : sssp_pruned(e.graph, source);
                 py::dict d;
                 py::list dist;
                 for (size_t v = 0; v < e.mesh.vertices().size(); ++v)
                     dist.append(r.dist[v]);
                 d["distances"] = dist;
                 d["settled"] = r.stats.settled;
                 return d;
             },
             py::arg("source"), py::arg("algorithm") = "pruned");

    m.def("single_tet", &fixtures::single_tet, py::arg("weight") = 1.0);
    m.def("two_tets", &fixtures::two_tets, py::arg("w0") = 2.0, py::arg("w1") = 3.0);
    m.def("bipyramid", &fixtures::bipyramid, py::arg("k"), py::arg("seed") = 0,
          py::arg("w_lo") = 1.0, py::arg("w_hi") = 1.0);
}
