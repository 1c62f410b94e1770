import { BookieClient } from './api';
import { mountApp } from './ui';

const params = new URLSearchParams(window.location.search);
const base = params.get('api') ?? 'http://127.0.0.1:8080';
mountApp(document.getElementById('app')!, new BookieClient(base));
