#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hierdis {

// Worker-pool size: HIERDIS_THREADS env var if set, hardware concurrency otherwise.
inline int default_thread_count() {
  if (const char* env = std::getenv("HIERDIS_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

class ThreadPool {
 public:
  explicit ThreadPool(int threads = default_thread_count()) {
    if (threads < 1) threads = 1;
    for (int i = 0; i < threads; ++i) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  ~ThreadPool() {
    {
      std::lock_guard lock(mu_);
      done_ = true;
    }
    cv_.notify_all();
    for (auto& t : workers_) t.join();
  }

  int size() const { return static_cast<int>(workers_.size()); }

  void submit(std::function<void()> job) {
    {
      std::lock_guard lock(mu_);
      jobs_.push(std::move(job));
      ++pending_;
    }
    cv_.notify_one();
  }

  // Blocks until every submitted job has finished. Rethrows the first
  // exception raised by a job, if any.
  void wait() {
    std::unique_lock lock(mu_);
    idle_cv_.wait(lock, [this] { return pending_ == 0; });
    if (error_) {
      auto e = error_;
      error_ = nullptr;
      std::rethrow_exception(e);
    }
  }

  // Static chunked parallel for over [0, n).
  template <typename Fn>
  void parallel_for(std::int64_t n, Fn&& fn, std::int64_t grain = 1) {
    if (n <= 0) return;
    std::int64_t chunks = std::min<std::int64_t>(size() * 4, (n + grain - 1) / grain);
    if (chunks <= 1) {
      for (std::int64_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::int64_t per = (n + chunks - 1) / chunks;
    for (std::int64_t c = 0; c < chunks; ++c) {
      std::int64_t lo = c * per, hi = std::min(n, lo + per);
      if (lo >= hi) break;
      submit([lo, hi, &fn] {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      });
    }
    wait();
  }

 private:
  void worker_loop() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [this] { return done_ || !jobs_.empty(); });
        if (jobs_.empty()) {
          if (done_) return;
          continue;
        }
        job = std::move(jobs_.front());
        jobs_.pop();
      }
      try {
        job();
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!error_) error_ = std::current_exception();
      }
      {
        std::lock_guard lock(mu_);
        if (--pending_ == 0) idle_cv_.notify_all();
      }
    }
  }

  std::vector<std::thread> workers_;
  std::queue<std::function<void()>> jobs_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::int64_t pending_ = 0;
  bool done_ = false;
  std::exception_ptr error_;
};

}  // namespace hierdis
