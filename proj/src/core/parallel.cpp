#include "affeig/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "affeig/errors.hpp"

namespace affeig {

namespace {

int env_threads() {
  if (const char* s = std::getenv("AFFEIG_THREADS")) {
    const int n = std::atoi(s);
    if (n >= 1) return std::min(n, 256);
  }
  return 1;
}

class Pool {
 public:
  explicit Pool(int n) { resize(n); }
  ~Pool() { stop(); }

  int size() const { return size_; }

  void resize(int n) {
    stop();
    size_ = n;
    quit_ = false;
    for (int i = 1; i < n; ++i) workers_.emplace_back([this, i] { loop(i); });
  }

  void run(int chunks, const std::function<void(int)>& task) {
    std::unique_lock lk(mu_);
    task_ = &task;
    chunks_ = chunks;
    next_ = 0;
    pending_ = chunks;
    error_ = nullptr;
    ++generation_;
    cv_.notify_all();
    lk.unlock();
    drain();
    lk.lock();
    done_cv_.wait(lk, [this] { return pending_ == 0; });
    task_ = nullptr;
    if (error_) std::rethrow_exception(error_);
  }

 private:
  void drain() {
    for (;;) {
      int c;
      const std::function<void(int)>* task;
      {
        std::lock_guard lk(mu_);
        if (!task_ || next_ >= chunks_) return;
        c = next_++;
        task = task_;
      }
      try {
        (*task)(c);
      } catch (...) {
        std::lock_guard lk(mu_);
        if (!error_) error_ = std::current_exception();
      }
      std::lock_guard lk(mu_);
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }

  void loop(int) {
    unsigned long seen = 0;
    for (;;) {
      {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return quit_ || generation_ != seen; });
        if (quit_) return;
        seen = generation_;
      }
      drain();
    }
  }

  void stop() {
    {
      std::lock_guard lk(mu_);
      quit_ = true;
      cv_.notify_all();
    }
    for (auto& t : workers_) t.join();
    workers_.clear();
  }

  int size_ = 1;
  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(int)>* task_ = nullptr;
  int chunks_ = 0, next_ = 0, pending_ = 0;
  unsigned long generation_ = 0;
  bool quit_ = false;
  std::exception_ptr error_;
};

thread_local bool t_inside = false;

std::mutex g_config_mu;
int g_threads = env_threads();

Pool& pool() {
  static Pool p(1);
  return p;
}

}  // namespace

int thread_count() {
  std::lock_guard lk(g_config_mu);
  return g_threads;
}

void set_thread_count(int n) {
  if (n < 1) throw InvalidArgument("thread count must be >= 1");
  std::lock_guard lk(g_config_mu);
  g_threads = std::min(n, 256);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t grain) {
  if (n == 0) return;
  const int threads = thread_count();
  grain = std::max<std::size_t>(grain, 1);
  if (threads <= 1 || n <= grain || t_inside) {
    body(0, n);
    return;
  }
  static std::mutex run_mu;
  std::lock_guard run_lock(run_mu);
  Pool& p = pool();
  if (p.size() != threads) p.resize(threads);
  const std::size_t chunks = std::min<std::size_t>((n + grain - 1) / grain, 4 * threads);
  const std::size_t per = (n + chunks - 1) / chunks;
  p.run(static_cast<int>(chunks), [&](int c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) return;
    const bool outer = t_inside;
    t_inside = true;
    try {
      body(b, e);
    } catch (...) {
      t_inside = outer;
      throw;
    }
    t_inside = outer;
  });
}

}  // namespace affeig
