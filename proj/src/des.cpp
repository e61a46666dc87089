#include "slice/des.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "slice/queuing.hpp"

namespace slice {

namespace {

enum EventKind : int { kArrival = 0, kTxDone = 1, kProcDone = 2 };

struct Event {
  double time;
  std::uint64_t seq;  // tie-break, making event order deterministic
  int kind;
  long task;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class TandemSim {
 public:
  TandemSim(const TandemSpec& spec, SeededStream& stream,
            std::vector<TaskRecord>* records)
      : spec_(spec), stream_(stream), records_(records) {
    if (spec.n_servers < 1) {
      throw std::invalid_argument("TandemSim: n_servers must be >= 1");
    }
    if (spec.mu_server <= 0.0) {
      throw std::invalid_argument("TandemSim: mu_server must be > 0");
    }
  }

  // Runs until `target_completions` tasks finish (arrivals generated
  // indefinitely) or, with a finite horizon, until every task arriving
  // before `horizon` has been either finished or cut off by the horizon.
  // Returns false if the queue cap was exceeded.
  bool run(long target_completions, double horizon, long queue_cap) {
    if (spec_.lambda > 0.0) {
      schedule(stream_.exponential(spec_.lambda), kArrival, -1);
    } else if (target_completions > 0) {
      schedule(0.0, kArrival, -1);  // single injected task, null process
    }
    const bool endless_arrivals =
        spec_.lambda > 0.0 && !std::isfinite(horizon);
    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > horizon) break;
      events_.pop();
      switch (ev.kind) {
        case kArrival: {
          const long id = new_task(ev.time);
          tx_queue_.push_back(id);
          start_tx(ev.time);
          if (endless_arrivals || spec_.lambda > 0.0) {
            const double next = ev.time + stream_.exponential(spec_.lambda);
            if (next < horizon) schedule(next, kArrival, -1);
          }
          break;
        }
        case kTxDone: {
          rec(ev.task).tx_end_s = ev.time;
          tx_busy_ = false;
          proc_queue_.push_back(ev.task);
          start_tx(ev.time);
          start_proc(ev.time);
          break;
        }
        case kProcDone: {
          rec(ev.task).proc_end_s = ev.time;
          --proc_busy_;
          delays_.push_back(rec(ev.task).delay_s());
          start_proc(ev.time);
          if (target_completions > 0 &&
              static_cast<long>(delays_.size()) >= target_completions) {
            return true;
          }
          break;
        }
      }
      if (static_cast<long>(tx_queue_.size() + proc_queue_.size()) >
          queue_cap) {
        return false;
      }
    }
    return true;
  }

  const std::vector<double>& delays() const { return delays_; }

 private:
  long new_task(double arrival) {
    TaskRecord r;
    r.arrival_s = arrival;
    store_.push_back(r);
    return static_cast<long>(store_.size()) - 1;
  }

  TaskRecord& rec(long id) { return store_[static_cast<std::size_t>(id)]; }

  void schedule(double time, int kind, long task) {
    events_.push(Event{time, seq_++, kind, task});
  }

  double draw_service(double mu) {
    if (spec_.model == ServiceModel::kDeterministic) return 1.0 / mu;
    return stream_.exponential(mu);
  }

  void start_tx(double now) {
    if (tx_busy_ || tx_queue_.empty()) return;
    const long id = tx_queue_.front();
    tx_queue_.pop_front();
    rec(id).tx_start_s = now;
    const double dur = spec_.mu_tx > 0.0 ? draw_service(spec_.mu_tx) : 0.0;
    tx_busy_ = true;
    schedule(now + dur, kTxDone, id);
  }

  void start_proc(double now) {
    while (proc_busy_ < spec_.n_servers && !proc_queue_.empty()) {
      const long id = proc_queue_.front();
      proc_queue_.pop_front();
      rec(id).proc_start_s = now;
      ++proc_busy_;
      schedule(now + draw_service(spec_.mu_server), kProcDone, id);
    }
  }

 public:
  // Completed records, in task-creation order, appended to *records_.
  void flush_records(int ap) {
    if (!records_) return;
    for (TaskRecord r : store_) {
      if (completed(r)) {
        r.ap = ap;
        records_->push_back(r);
      }
    }
  }

  // Service times are strictly positive, so completion implies proc_end > 0.
  static bool completed(const TaskRecord& r) { return r.proc_end_s > 0.0; }

 private:
  TandemSpec spec_;
  SeededStream& stream_;
  std::vector<TaskRecord>* records_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::deque<long> tx_queue_;
  std::deque<long> proc_queue_;
  std::vector<TaskRecord> store_;
  std::vector<double> delays_;
  bool tx_busy_ = false;
  int proc_busy_ = 0;
  std::uint64_t seq_ = 0;
};

double t_quantile_975(long dof) {
  if (dof >= 120) return 1.980;
  if (dof >= 60) return 2.000;
  if (dof >= 40) return 2.021;
  if (dof >= 30) return 2.042;
  if (dof >= 20) return 2.086;
  if (dof >= 10) return 2.228;
  if (dof >= 5) return 2.571;
  return 3.182;
}

LongRunResult summarize_long_run(const std::vector<double>& delays,
                                 long n_tasks) {
  LongRunResult out;
  out.tasks_completed = static_cast<long>(delays.size());
  const long warm = n_tasks / 10;
  const long n = static_cast<long>(delays.size()) - warm;
  if (n <= 0) {
    out.mean_delay_s = delays.empty() ? 0.0 : delays.back();
    return out;
  }
  double sum = 0.0;
  for (long i = warm; i < static_cast<long>(delays.size()); ++i) {
    sum += delays[i];
  }
  out.mean_delay_s = sum / n;

  // Batch means over the post-warm-up completions.
  const long batches = std::min<long>(40, n);
  const long m = n / batches;
  if (m >= 1 && batches >= 2) {
    double mean_of_means = 0.0;
    std::vector<double> bm(batches, 0.0);
    for (long b = 0; b < batches; ++b) {
      double s = 0.0;
      for (long i = 0; i < m; ++i) s += delays[warm + b * m + i];
      bm[b] = s / m;
      mean_of_means += bm[b];
    }
    mean_of_means /= batches;
    double var = 0.0;
    for (double v : bm) var += (v - mean_of_means) * (v - mean_of_means);
    var /= (batches - 1);
    out.std_error_s = std::sqrt(var / batches);
    out.ci_half_width_s = t_quantile_975(batches - 1) * out.std_error_s;
  }
  return out;
}

}  // namespace

LongRunResult simulate_tandem_long_run(const TandemSpec& spec, long n_tasks,
                                       SeededStream& stream, long queue_cap) {
  if (n_tasks < 1) {
    throw std::invalid_argument("simulate_tandem_long_run: n_tasks must be >= 1");
  }
  TandemSim sim(spec, stream, nullptr);
  const bool ok = sim.run(n_tasks, std::numeric_limits<double>::infinity(),
                          queue_cap);
  LongRunResult out = summarize_long_run(sim.delays(), n_tasks);
  out.stable = ok;
  return out;
}

WindowReport run_window(const ReservationDecision& decision,
                        const TrafficWindow& window, double duration_s,
                        const ScenarioConfig& cfg, SeededStream& stream,
                        ServiceModel model,
                        std::vector<TaskRecord>* records) {
  if (duration_s <= 0.0) {
    throw std::invalid_argument("run_window: duration must be > 0");
  }
  decision.validate(cfg);
  const int n_ap = cfg.ap_count();
  if (static_cast<int>(window.lambda_per_ap.size()) != n_ap) {
    throw std::invalid_argument("run_window: window/config AP count mismatch");
  }

  WindowReport report;
  report.per_ap.resize(n_ap);
  double delay_sum = 0.0;
  long satisfied = 0;
  for (int ap = 0; ap < n_ap; ++ap) {
    TandemSpec spec;
    spec.lambda = window.lambda_per_ap[ap];
    spec.mu_tx = tx_service_rate(decision.per_ap[ap].n_subcarriers, cfg);
    spec.n_servers = decision.per_ap[ap].n_vms;
    spec.mu_server = vm_service_rate(cfg);
    spec.model = model;

    TandemSim sim(spec, stream, records);
    if (spec.lambda > 0.0) {
      sim.run(/*target_completions=*/0, duration_s,
              /*queue_cap=*/std::numeric_limits<long>::max());
    }
    sim.flush_records(ap);

    auto& st = report.per_ap[ap];
    st.tasks_completed = static_cast<long>(sim.delays().size());
    if (st.tasks_completed > 0) {
      double s = 0.0;
      long ok = 0;
      for (double d : sim.delays()) {
        s += d;
        if (d <= cfg.delay_bound_s) ++ok;
      }
      st.mean_delay_s = s / st.tasks_completed;
      st.satisfaction_rate =
          static_cast<double>(ok) / static_cast<double>(st.tasks_completed);
      delay_sum += s;
      satisfied += ok;
      report.tasks_completed += st.tasks_completed;
    }
  }
  if (report.tasks_completed > 0) {
    report.mean_delay_s = delay_sum / report.tasks_completed;
    report.satisfaction_rate =
        static_cast<double>(satisfied) /
        static_cast<double>(report.tasks_completed);
  }
  return report;
}

LongRunResult long_run_mean_delay(const ApReservation& reservation,
                                  double lambda, const ScenarioConfig& cfg,
                                  long n_tasks, SeededStream& stream,
                                  long queue_cap) {
  TandemSpec spec;
  spec.lambda = lambda;
  spec.mu_tx = tx_service_rate(reservation.n_subcarriers, cfg);
  spec.n_servers = reservation.n_vms;
  spec.mu_server = vm_service_rate(cfg);
  spec.model = ServiceModel::kExponential;
  return simulate_tandem_long_run(spec, n_tasks, stream, queue_cap);
}

std::string task_records_to_csv(const std::vector<TaskRecord>& records) {
  std::string out = "ap,arrival,tx_start,tx_end,proc_start,proc_end,delay\n";
  char buf[32];
  auto append = [&](double v, char sep) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, p);
    out.push_back(sep);
  };
  for (const auto& r : records) {
    out += std::to_string(r.ap);
    out.push_back(',');
    append(r.arrival_s, ',');
    append(r.tx_start_s, ',');
    append(r.tx_end_s, ',');
    append(r.proc_start_s, ',');
    append(r.proc_end_s, ',');
    append(r.delay_s(), '\n');
  }
  return out;
}

}  // namespace slice
