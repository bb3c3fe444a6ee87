#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkdyn/linkage.hpp"
#include "linkdyn/thread.hpp"

namespace linkdyn {

enum class Reply : std::uint8_t { True, False, Blocked };

enum class ServiceKind : std::uint8_t {
    Plain,     // performs actions as requested
    Mimic,     // additionally accepts the marker-writing actions
    Shedding,  // replaces an update by its clear action when dropping is safe
};

struct ServiceOutcome;

// A service whose reply and state change may depend on the whole
// residual thread making the request. Rejecting a request (a Blocked
// reply) drives the service into an absorbing blocked state; requests
// from threads whose first step is not the requested method are always
// rejected. Immutable value: processing yields the derived service.
class ForecastingService {
public:
    static ForecastingService plain(DataLinkage initial);     // plain universe
    static ForecastingService mimic(DataLinkage initial);     // mimic universe
    static ForecastingService shedding(DataLinkage initial);  // plain universe

    ServiceKind kind() const { return kind_; }
    const UniversePtr& universe() const { return universe_; }
    bool blocked() const { return !state_.has_value(); }
    const std::optional<DataLinkage>& state() const { return state_; }

    // Reply and derived service for processing `method` when the thread
    // at (g, n) makes the request.
    ServiceOutcome process(std::string_view method, const ThreadGraph& g, NodeId n) const;

private:
    ForecastingService(ServiceKind kind, UniversePtr u, std::optional<DataLinkage> state)
        : kind_(kind), universe_(std::move(u)), state_(std::move(state)) {}

    ForecastingService as_blocked() const { return {kind_, universe_, std::nullopt}; }

    ServiceKind kind_;
    UniversePtr universe_;
    std::optional<DataLinkage> state_;  // nullopt: the absorbing blocked state
};

struct ServiceOutcome {
    Reply reply;
    ForecastingService next;
};

// One step of a thread composed with a service at a focus.
struct UseOutcome {
    enum class Kind : std::uint8_t { Terminated, Deadlocked, TauStep, ExternalPending };

    Kind kind = Kind::Terminated;
    // TauStep: the continuation and service after the step. `processed`
    // tells a service-processed action from a literal internal step.
    NodeId next = 0;
    std::optional<ForecastingService> service;
    bool processed = false;
    bool reply = false;       // processed steps: the service's reply
    std::string method;       // processed steps and ExternalPending
    std::string focus;        // ExternalPending
    NodeId yes = 0, no = 0;   // ExternalPending: branches for the caller to pick
};

UseOutcome use_step(const ThreadGraph& g, NodeId n, std::string_view focus,
                    const ForecastingService& h);

struct TraceEvent {
    enum class Kind : std::uint8_t {
        TauProcessed, TauLiteral, Foreign, Terminated, Deadlocked, FuelExhausted
    };
    Kind kind = Kind::Terminated;
    std::string method, focus;
    bool reply = false;
};

struct Trace {
    std::vector<TraceEvent> events;
    // service state after each event; nullopt once blocked
    std::vector<std::optional<DataLinkage>> states;

    bool terminated() const;
    bool deadlocked() const;
    bool out_of_fuel() const;
};

// Iterated use_step from (g, n). Actions at foreign foci consume the
// next scripted reply; running out of replies is an input error,
// running out of fuel marks the trace.
Trace run_thread(const ThreadGraph& g, NodeId n, std::string_view focus,
                 ForecastingService h, const std::vector<bool>& foreign_replies,
                 std::size_t fuel);

// A sampled request for conformance checking.
struct ConformanceSample {
    std::string method;
    std::optional<DataLinkage> state;  // nullopt: start in the blocked state
    ThreadGraph thread;
    NodeId node = 0;
};

// Checks the two service conditions on the samples: a Blocked reply
// lands in a state that rejects everything thereafter, and requests
// from terminated, deadlocked, tau-prefixed or differently-labelled
// threads are rejected. Returns human-readable violations; empty means
// conforming on this sample set.
std::vector<std::string> check_service_conditions(ServiceKind kind, const UniversePtr& u,
                                                  std::span<const ConformanceSample> samples);

}  // namespace linkdyn
