#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "ffpluq/ledger.hpp"

namespace ffpluq {

namespace detail {

struct Task {
    std::function<void()> body;
    RedLedger ledger;
    Kernel tag = Kernel::other;
    std::exception_ptr error;
    std::atomic<bool> taken{false};
    std::atomic<bool> done{false};
    struct GroupState* group = nullptr;
};

struct GroupState {
    std::mutex m;
    std::condition_variable cv;
    std::size_t pending = 0;
};

} // namespace detail

/// Fixed-width pool with a shared ready queue. The scheduler contract is only
/// that idle workers may execute any ready task; waiting threads help by
/// draining the queue, so nested fork-join never deadlocks.
class TaskPool {
public:
    static TaskPool& instance() {
        static TaskPool pool;
        return pool;
    }

    /// Total execution width including the calling thread. Width 1 means
    /// everything runs inline.
    void set_width(unsigned w) {
        if (w < 1) w = 1;
        std::lock_guard<std::mutex> lk(resize_mutex_);
        if (w == width_) return;
        stop_threads();
        width_ = w;
        start_threads(w - 1);
    }

    unsigned width() const { return width_; }

    ~TaskPool() { stop_threads(); }

private:
    friend class TaskGroup;

    TaskPool() : width_(1) {}

    void start_threads(unsigned n) {
        stop_ = false;
        for (unsigned i = 0; i < n; ++i)
            threads_.emplace_back([this] { worker_loop(); });
    }

    void stop_threads() {
        {
            std::lock_guard<std::mutex> lk(queue_mutex_);
            stop_ = true;
        }
        queue_cv_.notify_all();
        for (auto& t : threads_) t.join();
        threads_.clear();
    }

    void submit(const std::shared_ptr<detail::Task>& t) {
        {
            std::lock_guard<std::mutex> lk(queue_mutex_);
            queue_.push_back(t);
        }
        queue_cv_.notify_one();
    }

    std::shared_ptr<detail::Task> try_pop() {
        std::lock_guard<std::mutex> lk(queue_mutex_);
        if (queue_.empty()) return nullptr;
        auto t = queue_.front();
        queue_.pop_front();
        return t;
    }

    static void run_task(const std::shared_ptr<detail::Task>& t) {
        bool expected = false;
        if (!t->taken.compare_exchange_strong(expected, true)) return;
        {
            LedgerScope ls(&t->ledger);
            KernelScope ks(t->tag);
            try {
                t->body();
            } catch (...) {
                t->error = std::current_exception();
            }
        }
        auto* g = t->group;
        {
            std::lock_guard<std::mutex> lk(g->m);
            t->done.store(true);
            --g->pending;
        }
        g->cv.notify_all();
    }

    void worker_loop() {
        for (;;) {
            std::shared_ptr<detail::Task> t;
            {
                std::unique_lock<std::mutex> lk(queue_mutex_);
                queue_cv_.wait(lk, [this] { return stop_ || !queue_.empty(); });
                if (stop_ && queue_.empty()) return;
                t = queue_.front();
                queue_.pop_front();
            }
            run_task(t);
        }
    }

    unsigned width_ = 1;
    std::vector<std::thread> threads_;
    std::deque<std::shared_ptr<detail::Task>> queue_;
    std::mutex queue_mutex_;
    std::condition_variable queue_cv_;
    std::mutex resize_mutex_;
    bool stop_ = false;
};

inline void set_workers(unsigned w) { TaskPool::instance().set_width(w); }
inline unsigned workers() { return TaskPool::instance().width(); }

/// Fork-join scope. Each spawned task records reductions into its own ledger;
/// wait() merges them into the spawner's ledger in spawn order, so totals are
/// independent of which worker ran what.
class TaskGroup {
public:
    TaskGroup()
        : pool_(TaskPool::instance()),
          parent_sink_(detail::ledger_tls().sink),
          parent_tag_(detail::ledger_tls().tag) {}

    TaskGroup(const TaskGroup&) = delete;
    TaskGroup& operator=(const TaskGroup&) = delete;

    void spawn(std::function<void()> fn) {
        if (pool_.width() <= 1) {
            fn(); // inline; counters already flow to the parent sink
            return;
        }
        auto t = std::make_shared<detail::Task>();
        t->body = std::move(fn);
        t->tag = parent_tag_;
        t->group = &state_;
        {
            std::lock_guard<std::mutex> lk(state_.m);
            ++state_.pending;
        }
        tasks_.push_back(t);
        pool_.submit(t);
    }

    void wait() {
        // Help while waiting: run any ready task rather than blocking.
        for (;;) {
            {
                std::lock_guard<std::mutex> lk(state_.m);
                if (state_.pending == 0) break;
            }
            auto t = pool_.try_pop();
            if (t) {
                TaskPool::run_task(t);
                continue;
            }
            std::unique_lock<std::mutex> lk(state_.m);
            state_.cv.wait_for(lk, std::chrono::milliseconds(1),
                               [this] { return state_.pending == 0; });
        }
        std::exception_ptr first_error;
        for (auto& t : tasks_) {
            if (parent_sink_) parent_sink_->merge(t->ledger);
            if (t->error && !first_error) first_error = t->error;
        }
        tasks_.clear();
        if (first_error) std::rethrow_exception(first_error);
    }

    ~TaskGroup() {
        if (!tasks_.empty()) {
            try {
                wait();
            } catch (...) {
            }
        }
    }

private:
    TaskPool& pool_;
    RedLedger* parent_sink_;
    Kernel parent_tag_;
    detail::GroupState state_;
    std::vector<std::shared_ptr<detail::Task>> tasks_;
};

} // namespace ffpluq
