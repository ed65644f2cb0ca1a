#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "mussti/error.hpp"

namespace mussti {

/// Zone roles by level: 0 storage, 1 operation, 2 optical. Gates run at
/// level >= 1; fiber links terminate only at level-2 zones.
struct ZoneSpec {
    int id = -1;
    int module_id = -1;
    int level = 0;
    int capacity = 1;
    int position = 0;
    bool standalone_optical = false;

    bool gate_capable() const { return level >= 1; }
};

struct FiberLink {
    int a = -1;
    int b = -1;
};

struct ModuleSpec {
    int id = -1;
    std::vector<int> zone_ids;
};

enum class FiberMode { AllToAll, Ring };

/// Template for one module, used when auto-sizing a device to a circuit.
struct ModuleTemplate {
    struct Zone {
        int level;
        int capacity;
        int position;
    };
    std::vector<Zone> zones;
    int max_qubits_per_module = 32;
    double hop_distance_um = 100.0;
    // All-to-all keeps any cross-module gate directly executable; a ring
    // restricts fiber gates to adjacent modules.
    FiberMode fiber_mode = FiberMode::AllToAll;

    /// One optical, one operation, two storage zones in a linear arrangement.
    static ModuleTemplate standard(int capacity = 16, int max_per_module = 32) {
        ModuleTemplate t;
        t.zones = {{0, capacity, 0}, {1, capacity, 1}, {2, capacity, 2}, {0, capacity, 3}};
        t.max_qubits_per_module = max_per_module;
        return t;
    }

    /// Variant with `optical_count` optical zones appended to the chain.
    static ModuleTemplate with_optical_zones(int optical_count, int capacity = 16, int max_per_module = 32) {
        ModuleTemplate t;
        t.zones = {{0, capacity, 0}, {1, capacity, 1}};
        int pos = 2;
        for (int i = 0; i < optical_count; ++i) t.zones.push_back({2, capacity, pos++});
        t.zones.push_back({0, capacity, pos});
        t.max_qubits_per_module = max_per_module;
        return t;
    }
};

enum class DeviceMode { Eml, Grid };

/// Immutable device description: modules of zones, intra-module adjacency,
/// and optical fiber links across modules. Ions shuttle only inside a module;
/// the only cross-module interaction is an entangling operation over a fiber.
class DeviceTopology {
public:
    DeviceMode mode = DeviceMode::Eml;
    std::vector<ModuleSpec> modules;
    std::vector<ZoneSpec> zones;
    std::vector<FiberLink> links;
    double hop_distance_um = 100.0;
    int max_qubits_per_module = 32;
    int grid_rows = 0;
    int grid_cols = 0;

    int zone_count() const { return static_cast<int>(zones.size()); }
    int module_count() const { return static_cast<int>(modules.size()); }

    const ZoneSpec& zone(int id) const {
        if (id < 0 || id >= zone_count()) raise(ErrorKind::UnknownZone, "zone " + std::to_string(id));
        return zones[static_cast<std::size_t>(id)];
    }

    int module_of_zone(int zone_id) const { return zone(zone_id).module_id; }

    /// Ion capacity of one module (sum of its zone capacities), before the
    /// per-module ion cap is applied.
    int module_slot_capacity(int module_id) const {
        int total = 0;
        for (int z : modules.at(static_cast<std::size_t>(module_id)).zone_ids) total += zone(z).capacity;
        return total;
    }

    /// Number of ions a module may actually hold.
    int module_ion_capacity(int module_id) const {
        return std::min(module_slot_capacity(module_id), max_qubits_per_module);
    }

    int total_ion_capacity() const {
        int total = 0;
        for (const auto& m : modules) total += module_ion_capacity(m.id);
        return total;
    }

    const std::vector<int>& neighbors(int zone_id) const {
        zone(zone_id);
        return adjacency_[static_cast<std::size_t>(zone_id)];
    }

    const std::vector<int>& fiber_partners(int zone_id) const {
        zone(zone_id);
        return fiber_partners_[static_cast<std::size_t>(zone_id)];
    }

    bool fiber_linked(int za, int zb) const {
        const auto& p = fiber_partners(za);
        return std::find(p.begin(), p.end(), zb) != p.end();
    }

    /// Shortest hop count between zones of the same module; nullopt across
    /// modules (ions never shuttle over a fiber).
    std::optional<int> zone_distance(int za, int zb) const {
        zone(za);
        zone(zb);
        const int d = hop_table_[static_cast<std::size_t>(za)][static_cast<std::size_t>(zb)];
        if (d < 0) return std::nullopt;
        return d;
    }

    double hop_duration_us(double move_speed_um_per_us) const { return hop_distance_um / move_speed_um_per_us; }

    /// Zones ordered for placement: module ascending, level descending, id
    /// ascending. Filling in this order packs each module from its highest
    /// level down before touching the next module.
    std::vector<int> placement_zone_order() const {
        std::vector<int> order(zones.size());
        for (std::size_t i = 0; i < zones.size(); ++i) order[i] = zones[i].id;
        std::sort(order.begin(), order.end(), [this](int a, int b) {
            const auto& za = zone(a);
            const auto& zb = zone(b);
            if (za.module_id != zb.module_id) return za.module_id < zb.module_id;
            if (za.level != zb.level) return za.level > zb.level;
            return a < b;
        });
        return order;
    }

    void finalize() {
        validate_structure();
        build_adjacency();
        build_hop_table();
        build_fiber_index();
        validate_links();
    }

    nlohmann::json to_json() const;
    static DeviceTopology from_json(const nlohmann::json& doc);

private:
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::vector<int>> hop_table_;
    std::vector<std::vector<int>> fiber_partners_;
    std::vector<std::pair<int, int>> explicit_adjacency_;

    friend DeviceTopology auto_size_device(int, const ModuleTemplate&);
    friend DeviceTopology make_grid_device(int, int, int, double);

    void validate_structure() {
        if (zones.empty() || modules.empty()) raise(ErrorKind::SchemaError, "device has no zones");
        for (std::size_t i = 0; i < zones.size(); ++i) {
            if (zones[i].id != static_cast<int>(i)) raise(ErrorKind::SchemaError, "zone ids must be dense and ordered");
            if (zones[i].capacity < 1) raise(ErrorKind::SchemaError, "zone capacity must be >= 1");
            if (zones[i].level < 0 || zones[i].level > 2) raise(ErrorKind::SchemaError, "zone level must be 0, 1 or 2");
        }
        for (std::size_t m = 0; m < modules.size(); ++m) {
            if (modules[m].id != static_cast<int>(m)) raise(ErrorKind::SchemaError, "module ids must be dense and ordered");
            if (modules[m].zone_ids.empty()) raise(ErrorKind::SchemaError, "module without zones");
            for (int z : modules[m].zone_ids) {
                if (zone(z).module_id != modules[m].id) raise(ErrorKind::SchemaError, "zone/module assignment mismatch");
            }
            if (mode == DeviceMode::Eml && module_slot_capacity(modules[m].id) > max_qubits_per_module &&
                max_qubits_per_module <= 0)
                raise(ErrorKind::SchemaError, "invalid max_qubits_per_module");
        }
        if (max_qubits_per_module < 1) raise(ErrorKind::CapacityError, "max_qubits_per_module must be >= 1");
    }

    void build_adjacency() {
        adjacency_.assign(zones.size(), {});
        if (!explicit_adjacency_.empty()) {
            for (auto [a, b] : explicit_adjacency_) {
                if (zone(a).module_id != zone(b).module_id)
                    raise(ErrorKind::SchemaError, "adjacency may not cross modules");
                adjacency_[static_cast<std::size_t>(a)].push_back(b);
                adjacency_[static_cast<std::size_t>(b)].push_back(a);
            }
        } else if (mode == DeviceMode::Grid) {
            // Row-major grid, 4-neighbour connectivity.
            for (int r = 0; r < grid_rows; ++r) {
                for (int c = 0; c < grid_cols; ++c) {
                    const int z = r * grid_cols + c;
                    if (c + 1 < grid_cols) {
                        adjacency_[static_cast<std::size_t>(z)].push_back(z + 1);
                        adjacency_[static_cast<std::size_t>(z + 1)].push_back(z);
                    }
                    if (r + 1 < grid_rows) {
                        adjacency_[static_cast<std::size_t>(z)].push_back(z + grid_cols);
                        adjacency_[static_cast<std::size_t>(z + grid_cols)].push_back(z);
                    }
                }
            }
        } else {
            // Default layout: a path through each module's zones in position order.
            for (const auto& m : modules) {
                std::vector<int> ordered = m.zone_ids;
                std::sort(ordered.begin(), ordered.end(), [this](int a, int b) {
                    if (zone(a).position != zone(b).position) return zone(a).position < zone(b).position;
                    return a < b;
                });
                for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
                    adjacency_[static_cast<std::size_t>(ordered[i])].push_back(ordered[i + 1]);
                    adjacency_[static_cast<std::size_t>(ordered[i + 1])].push_back(ordered[i]);
                }
            }
        }
        for (auto& nbrs : adjacency_) {
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        }
    }

    void build_hop_table() {
        const auto n = zones.size();
        hop_table_.assign(n, std::vector<int>(n, -1));
        for (std::size_t src = 0; src < n; ++src) {
            auto& dist = hop_table_[src];
            dist[src] = 0;
            std::queue<int> bfs;
            bfs.push(static_cast<int>(src));
            while (!bfs.empty()) {
                const int z = bfs.front();
                bfs.pop();
                for (int nb : adjacency_[static_cast<std::size_t>(z)]) {
                    if (dist[static_cast<std::size_t>(nb)] < 0) {
                        dist[static_cast<std::size_t>(nb)] = dist[static_cast<std::size_t>(z)] + 1;
                        bfs.push(nb);
                    }
                }
            }
        }
        for (const auto& m : modules) {
            for (int a : m.zone_ids) {
                for (int b : m.zone_ids) {
                    if (hop_table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] < 0)
                        raise(ErrorKind::SchemaError, "zone graph of module " + std::to_string(m.id) + " is not connected");
                }
            }
        }
    }

    void build_fiber_index() {
        fiber_partners_.assign(zones.size(), {});
        for (const auto& link : links) {
            fiber_partners_[static_cast<std::size_t>(link.a)].push_back(link.b);
            fiber_partners_[static_cast<std::size_t>(link.b)].push_back(link.a);
        }
        for (auto& p : fiber_partners_) {
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
        }
    }

    void validate_links() {
        for (const auto& link : links) {
            const auto& za = zone(link.a);
            const auto& zb = zone(link.b);
            if (za.level != 2 || zb.level != 2)
                raise(ErrorKind::LinkError, "fiber endpoints must be optical zones (" + std::to_string(link.a) + "," +
                                                std::to_string(link.b) + ")");
            if (za.module_id == zb.module_id)
                raise(ErrorKind::LinkError, "fiber endpoints must lie on different modules");
        }
        for (const auto& z : zones) {
            if (z.level == 2 && fiber_partners_[static_cast<std::size_t>(z.id)].empty() && !z.standalone_optical)
                raise(ErrorKind::SchemaError,
                      "optical zone " + std::to_string(z.id) + " has no fiber link and is not marked standalone");
        }
    }
};

/// Build a device with ceil(n / per-module ion cap) modules instantiated from
/// the template, optical zones fiber-linked in a ring across modules (or
/// all-to-all when the template requests it).
inline DeviceTopology auto_size_device(int num_qubits, const ModuleTemplate& tmpl = ModuleTemplate::standard()) {
    if (num_qubits < 1) raise(ErrorKind::ConfigError, "device must hold at least one qubit");
    if (tmpl.zones.empty()) raise(ErrorKind::ConfigError, "module template has no zones");
    const int per_module = std::min(tmpl.max_qubits_per_module, [&] {
        int s = 0;
        for (const auto& z : tmpl.zones) s += z.capacity;
        return s;
    }());
    const int module_count = (num_qubits + per_module - 1) / per_module;

    DeviceTopology topo;
    topo.mode = DeviceMode::Eml;
    topo.hop_distance_um = tmpl.hop_distance_um;
    topo.max_qubits_per_module = tmpl.max_qubits_per_module;

    std::vector<std::vector<int>> optical_by_module(static_cast<std::size_t>(module_count));
    int zone_id = 0;
    for (int m = 0; m < module_count; ++m) {
        ModuleSpec mod;
        mod.id = m;
        for (const auto& tz : tmpl.zones) {
            ZoneSpec z;
            z.id = zone_id++;
            z.module_id = m;
            z.level = tz.level;
            z.capacity = tz.capacity;
            z.position = tz.position;
            z.standalone_optical = tz.level == 2 && module_count == 1;
            if (tz.level == 2) optical_by_module[static_cast<std::size_t>(m)].push_back(z.id);
            mod.zone_ids.push_back(z.id);
            topo.zones.push_back(z);
        }
        topo.modules.push_back(std::move(mod));
    }

    if (module_count > 1) {
        const std::size_t ports = optical_by_module[0].size();
        for (std::size_t m = 0; m < optical_by_module.size(); ++m) {
            if (optical_by_module[m].size() != ports)
                raise(ErrorKind::SchemaError, "modules disagree on optical zone count");
        }
        if (tmpl.fiber_mode == FiberMode::AllToAll) {
            for (int ma = 0; ma < module_count; ++ma)
                for (int mb = ma + 1; mb < module_count; ++mb)
                    for (std::size_t port = 0; port < ports; ++port)
                        topo.links.push_back({optical_by_module[static_cast<std::size_t>(ma)][port],
                                              optical_by_module[static_cast<std::size_t>(mb)][port]});
        } else {
            // One ring per optical port index.
            for (std::size_t port = 0; port < ports; ++port) {
                for (int m = 0; m < module_count; ++m) {
                    const int next = (m + 1) % module_count;
                    if (next == m) continue;
                    if (module_count == 2 && m == 1) break; // avoid the duplicate back edge
                    topo.links.push_back({optical_by_module[static_cast<std::size_t>(m)][port],
                                          optical_by_module[static_cast<std::size_t>(next)][port]});
                }
            }
        }
    }
    topo.finalize();
    return topo;
}

/// Plain QCCD grid: one module of rows x cols equal-capacity traps, all gate
/// capable, 4-neighbour shuttling. The per-module ion cap is lifted to the
/// full slot count.
inline DeviceTopology make_grid_device(int rows, int cols, int trap_capacity, double hop_distance_um = 100.0) {
    if (rows < 1 || cols < 1 || trap_capacity < 1) raise(ErrorKind::ConfigError, "invalid grid dimensions");
    DeviceTopology topo;
    topo.mode = DeviceMode::Grid;
    topo.grid_rows = rows;
    topo.grid_cols = cols;
    topo.hop_distance_um = hop_distance_um;
    topo.max_qubits_per_module = rows * cols * trap_capacity;
    ModuleSpec mod;
    mod.id = 0;
    for (int z = 0; z < rows * cols; ++z) {
        ZoneSpec spec;
        spec.id = z;
        spec.module_id = 0;
        spec.level = 1;
        spec.capacity = trap_capacity;
        spec.position = z;
        mod.zone_ids.push_back(z);
        topo.zones.push_back(spec);
    }
    topo.modules.push_back(std::move(mod));
    topo.finalize();
    return topo;
}

inline nlohmann::json DeviceTopology::to_json() const {
    nlohmann::json doc;
    doc["mode"] = mode == DeviceMode::Grid ? "grid" : "eml";
    doc["hop_distance_um"] = hop_distance_um;
    doc["max_qubits_per_module"] = max_qubits_per_module;
    if (mode == DeviceMode::Grid) {
        doc["grid"] = {{"rows", grid_rows}, {"cols", grid_cols}, {"trap_capacity", zones.front().capacity}};
        return doc;
    }
    doc["modules"] = nlohmann::json::array();
    for (const auto& m : modules) {
        nlohmann::json mj;
        mj["id"] = m.id;
        mj["zones"] = nlohmann::json::array();
        for (int zid : m.zone_ids) {
            const auto& z = zone(zid);
            nlohmann::json zj = {{"id", z.id}, {"level", z.level}, {"capacity", z.capacity}, {"position", z.position}};
            if (z.standalone_optical) zj["standalone"] = true;
            mj["zones"].push_back(zj);
        }
        doc["modules"].push_back(mj);
    }
    doc["links"] = nlohmann::json::array();
    for (const auto& l : links) doc["links"].push_back({l.a, l.b});
    return doc;
}

inline DeviceTopology DeviceTopology::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) raise(ErrorKind::SchemaError, "device config must be a JSON object");
    const std::string mode = doc.value("mode", "eml");
    if (mode == "grid") {
        const auto& g = doc.at("grid");
        return make_grid_device(g.at("rows").get<int>(), g.at("cols").get<int>(), g.at("trap_capacity").get<int>(),
                                doc.value("hop_distance_um", 100.0));
    }
    if (mode != "eml") raise(ErrorKind::SchemaError, "mode must be 'eml' or 'grid'");

    DeviceTopology topo;
    topo.mode = DeviceMode::Eml;
    topo.hop_distance_um = doc.value("hop_distance_um", 100.0);
    topo.max_qubits_per_module = doc.value("max_qubits_per_module", 32);
    if (!doc.contains("modules")) raise(ErrorKind::SchemaError, "missing 'modules'");
    try {
        for (const auto& mj : doc.at("modules")) {
            ModuleSpec m;
            m.id = mj.at("id").get<int>();
            for (const auto& zj : mj.at("zones")) {
                ZoneSpec z;
                z.id = zj.at("id").get<int>();
                z.module_id = m.id;
                z.level = zj.at("level").get<int>();
                z.capacity = zj.at("capacity").get<int>();
                z.position = zj.value("position", static_cast<int>(m.zone_ids.size()));
                z.standalone_optical = zj.value("standalone", false);
                m.zone_ids.push_back(z.id);
                if (z.id != static_cast<int>(topo.zones.size()))
                    raise(ErrorKind::SchemaError, "zone ids must be dense, ordered and globally unique");
                topo.zones.push_back(z);
            }
            if (mj.contains("adjacency")) {
                for (const auto& e : mj.at("adjacency"))
                    topo.explicit_adjacency_.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            }
            topo.modules.push_back(std::move(m));
        }
        for (const auto& lj : doc.value("links", nlohmann::json::array()))
            topo.links.push_back({lj.at(0).get<int>(), lj.at(1).get<int>()});
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::SchemaError, std::string("malformed device config: ") + e.what());
    }
    // Zone slots may exceed the per-module ion cap (the cap binds at placement
    // time), but a module that cannot hold a single ion is a config error.
    for (const auto& m : topo.modules) {
        if (topo.module_ion_capacity(m.id) < 1)
            raise(ErrorKind::CapacityError, "module " + std::to_string(m.id) + " cannot hold any ions");
    }
    topo.finalize();
    return topo;
}

inline DeviceTopology load_device(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorKind::ConfigError, "cannot open device config '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::SchemaError, std::string("invalid JSON: ") + e.what());
    }
    return DeviceTopology::from_json(doc);
}

} // namespace mussti
